#pragma once

#include <optional>
#include <string>
#include <vector>

#include "system.hpp"

namespace om {

enum class Verdict { OM, COM_NOT_OM, NEITHER };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::OM: return "OM";
        case Verdict::COM_NOT_OM: return "COM_NOT_OM";
        default: return "NEITHER";
    }
}

struct Classification {
    bool composition = false;        // X o Y stays in the system
    bool strong_elimination = false; // separator elements can be eliminated
    bool symmetric = false;          // closed under negation
    bool face_symmetric = false;     // X o -Y stays in the system
    bool simple = false;
    Verdict verdict = Verdict::NEITHER;
};

inline bool check_composition(const SignSystem& s) {
    for (const auto& x : s.vectors)
        for (const auto& y : s.vectors)
            if (!s.contains(x.composed(y))) return false;
    return true;
}

inline bool check_strong_elimination(const SignSystem& s) {
    for (const auto& x : s.vectors)
        for (const auto& y : s.vectors) {
            ElemMask sep = x.separator_mask(y);
            if (!sep) continue;
            SignVector comp = x.composed(y);
            ElemMask want_p = comp.plus_mask() & ~sep;
            ElemMask want_m = comp.minus_mask() & ~sep;
            ElemMask witnessed = 0;
            for (const auto& z : s.vectors) {
                if ((z.plus_mask() & ~sep) != want_p) continue;
                if ((z.minus_mask() & ~sep) != want_m) continue;
                witnessed |= sep & z.zero_mask();
                if (witnessed == sep) break;
            }
            if (witnessed != sep) return false;
        }
    return true;
}

inline bool check_symmetric(const SignSystem& s) {
    for (const auto& x : s.vectors)
        if (!s.contains(x.negated())) return false;
    return true;
}

inline bool check_face_symmetric(const SignSystem& s) {
    for (const auto& x : s.vectors)
        for (const auto& y : s.vectors)
            if (!s.contains(x.composed(y.negated()))) return false;
    return true;
}

// Simple: every element takes all three signs, and every pair of elements is
// separated twice over, by a vector where they agree nonzero and by one where
// they disagree nonzero.
inline bool check_simple(const SignSystem& s) {
    const auto& ids = s.ground->ids();
    for (ElementId e : ids) {
        bool p = false, m = false, z = false;
        for (const auto& x : s.vectors) {
            Sign v = x.at(e);
            p |= v == Sign::Plus;
            m |= v == Sign::Minus;
            z |= v == Sign::Zero;
        }
        if (!(p && m && z)) return false;
    }
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j) {
            bool agree = false, oppose = false;
            for (const auto& x : s.vectors) {
                Sign a = x.at(ids[i]), b = x.at(ids[j]);
                if (a == Sign::Zero || b == Sign::Zero) continue;
                agree |= a == b;
                oppose |= a != b;
            }
            if (!(agree && oppose)) return false;
        }
    return true;
}

inline Classification classify_system(const SignSystem& s) {
    if (s.empty()) throw EmptySystem("cannot classify an empty system");
    Classification c;
    c.composition = check_composition(s);
    c.strong_elimination = check_strong_elimination(s);
    c.symmetric = check_symmetric(s);
    c.face_symmetric = c.symmetric ? c.composition : check_face_symmetric(s);
    c.simple = check_simple(s);
    if (c.composition && c.strong_elimination && c.symmetric)
        c.verdict = Verdict::OM;
    else if (c.composition && c.strong_elimination && c.face_symmetric)
        c.verdict = Verdict::COM_NOT_OM;
    else
        c.verdict = Verdict::NEITHER;
    return c;
}

inline SignSystem topes(const SignSystem& s) {
    std::vector<SignVector> t;
    for (const auto& x : s.vectors)
        if (x.full_support()) t.push_back(x);
    return SignSystem::make(s.ground, std::move(t));
}

// Minimal nonzero vectors in the conformal order.
inline SignSystem cocircuits(const SignSystem& s) {
    std::vector<SignVector> c;
    for (const auto& x : s.vectors) {
        if (x.is_zero()) continue;
        bool minimal = true;
        for (const auto& y : s.vectors) {
            if (y.is_zero() || y == x) continue;
            if (y.conforms_to(x)) { minimal = false; break; }
        }
        if (minimal) c.push_back(x);
    }
    return SignSystem::make(s.ground, std::move(c));
}

inline bool strictly_conforms(const SignVector& x, const SignVector& y) {
    return x.conforms_to(y) && x != y;
}

// True if y covers x: x < y with no vector of the system strictly between.
inline bool covers(const SignSystem& s, const SignVector& x, const SignVector& y) {
    if (!strictly_conforms(x, y)) return false;
    for (const auto& z : s.vectors)
        if (strictly_conforms(x, z) && strictly_conforms(z, y)) return false;
    return true;
}

// Height of the conformal-order poset. Every saturated chain must have the
// same shape: covers raise the height by one and all maximal vectors sit at
// the top, otherwise the system has no well-defined rank.
inline unsigned rank_of(const SignSystem& s) {
    if (s.empty()) throw EmptySystem("rank of an empty system");
    size_t n = s.size();
    std::vector<std::vector<size_t>> preds(n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i)
            if (i != j && strictly_conforms(s.vectors[i], s.vectors[j])) preds[j].push_back(i);
    std::vector<int> h(n, 0);
    // vectors are sorted canonically, not by height; iterate in support order
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return std::popcount(s.vectors[a].support_mask()) < std::popcount(s.vectors[b].support_mask());
    });
    for (size_t j : order)
        for (size_t i : preds[j]) h[j] = std::max(h[j], h[i] + 1);
    unsigned top = 0;
    std::vector<bool> is_max(n, true);
    for (size_t j = 0; j < n; ++j) {
        for (size_t i : preds[j]) {
            is_max[i] = false;
            bool is_cover = true;
            for (size_t k : preds[j])
                if (k != i && strictly_conforms(s.vectors[i], s.vectors[k])) { is_cover = false; break; }
            if (is_cover && h[j] != h[i] + 1)
                throw NotGraded("cover " + s.vectors[i].render() + " -> " + s.vectors[j].render() +
                                " skips height " + std::to_string(h[i] + 1));
        }
        top = std::max(top, static_cast<unsigned>(h[j]));
    }
    for (size_t j = 0; j < n; ++j)
        if (is_max[j] && static_cast<unsigned>(h[j]) != top)
            throw NotGraded("maximal vector " + s.vectors[j].render() + " at height " +
                            std::to_string(h[j]) + ", expected " + std::to_string(top));
    return top;
}

inline SignSystem delete_elements(const SignSystem& s, ElemMask drop) {
    if (drop & ~s.ground->mask()) throw ElementNotFound("deletion of elements outside the ground set");
    if (drop == s.ground->mask()) throw Error("cannot delete the whole ground set");
    GroundPtr sub = s.ground->without(drop);
    std::vector<SignVector> out;
    out.reserve(s.size());
    for (const auto& x : s.vectors) out.push_back(x.restricted_to(sub));
    return SignSystem::make(sub, std::move(out));
}

inline SignSystem contract(const SignSystem& s, ElemMask zero_on) {
    if (zero_on & ~s.ground->mask()) throw ElementNotFound("contraction of elements outside the ground set");
    if (zero_on == s.ground->mask()) throw Error("cannot contract the whole ground set");
    GroundPtr sub = s.ground->without(zero_on);
    std::vector<SignVector> out;
    for (const auto& x : s.vectors)
        if (!(x.support_mask() & zero_on)) out.push_back(x.restricted_to(sub));
    return SignSystem::make(sub, std::move(out));
}

// Vectors above a fixed base, written on the base's zero set. For a covector
// system this is again a covector system (the local structure at the face).
struct Upset {
    SignSystem reduced;
    SignVector base;
};

inline Upset upset(const SignSystem& s, const SignVector& x) {
    if (!s.contains(x)) throw VectorNotInSystem(x.render());
    GroundPtr sub = s.ground->restricted(x.zero_mask());
    std::vector<SignVector> out;
    for (const auto& y : s.vectors)
        if (x.conforms_to(y)) out.push_back(y.restricted_to(sub));
    return Upset{SignSystem::make(sub, std::move(out)), x};
}

struct OrientedStructure {
    SignSystem system;
    Classification classification;
    SignSystem topes;
    SignSystem cocircuits;
    std::optional<unsigned> rank; // empty when the poset is not graded
};

inline OrientedStructure analyze(const SignSystem& s) {
    OrientedStructure o;
    o.system = s;
    o.classification = classify_system(s);
    o.topes = topes(s);
    o.cocircuits = cocircuits(s);
    try {
        o.rank = rank_of(s);
    } catch (const NotGraded&) {
        o.rank = std::nullopt;
    }
    return o;
}

// Reduction to a simple system: constant elements are dropped and each class
// of (anti)parallel elements keeps its smallest id. Ids are stable, so data
// computed on the reduction reads back directly against the original.
struct Simplified {
    SignSystem system;
    ElemMask kept = 0;
};

inline Simplified simplify(const SignSystem& s) {
    if (s.empty()) throw EmptySystem("cannot simplify an empty system");
    const auto& ids = s.ground->ids();
    ElemMask kept = 0;
    for (ElementId e : ids) {
        Sign first = s.vectors.front().at(e);
        bool constant = true;
        for (const auto& x : s.vectors)
            if (x.at(e) != first) { constant = false; break; }
        if (constant) continue;
        bool represented = false;
        for (ElementId f : ids) {
            if (f >= e || !(kept & elem_bit(f))) continue;
            bool par = true, anti = true;
            for (const auto& x : s.vectors) {
                par &= x.at(e) == x.at(f);
                anti &= x.at(e) == opposite(x.at(f));
            }
            if (par || anti) { represented = true; break; }
        }
        if (!represented) kept |= elem_bit(e);
    }
    if (!kept) throw Error("simplification removed every element");
    Simplified out;
    out.kept = kept;
    out.system = kept == s.ground->mask() ? s : delete_elements(s, s.ground->mask() & ~kept);
    return out;
}

} // namespace om
