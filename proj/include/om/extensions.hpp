#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "om/axioms.hpp"
#include "om/tope_graph.hpp"

namespace om {

// A localization assigns a sign to every cocircuit and thereby determines a
// single-element extension. Two flavours: a lexicographic rule given by a
// signed element chain, or an explicit table.
struct Localization {
    enum class Kind { Lex, Explicit };
    Kind kind = Kind::Lex;
    std::vector<std::pair<ElementId, Sign>> chain;
    std::map<SignVector, Sign> table;

    static Localization lex(std::vector<std::pair<ElementId, Sign>> chain) {
        Localization l;
        l.kind = Kind::Lex;
        std::set<ElementId> seen;
        for (auto& [e, s] : chain) {
            if (s == Sign::Zero) throw Error("lexicographic rule needs nonzero signs");
            if (!seen.insert(e).second)
                throw Error("element repeated in lexicographic rule");
        }
        l.chain = std::move(chain);
        return l;
    }

    static Localization explicit_table(std::map<SignVector, Sign> table) {
        Localization l;
        l.kind = Kind::Explicit;
        l.table = std::move(table);
        return l;
    }

    Sign value(const SignVector& cocircuit) const {
        if (kind == Kind::Lex) {
            for (auto& [e, s] : chain) {
                Sign v = cocircuit.at(e);
                if (v == Sign::Zero) continue;
                return v == Sign::Plus ? s : opposite(s);
            }
            return Sign::Zero;
        }
        auto it = table.find(cocircuit);
        if (it == table.end())
            throw UnknownKey("no localization value for cocircuit " + cocircuit.render());
        return it->second;
    }
};

struct ExtensionResult {
    SignSystem system;
    ElementId element = 0;
};

// Extends a covector system by one element. Each covector collects the
// localization values of the cocircuits below it: no nonzero value pins the
// new coordinate to 0, a single sign pins it to that sign, and a conflict
// splits the covector into all three.
inline ExtensionResult extend_by_localization(const SignSystem& base, const Localization& sigma,
                                              std::optional<ElementId> new_id = std::nullopt,
                                              std::string new_name = {}) {
    Classification base_cls = classify_system(base);
    if (base_cls.verdict != Verdict::OM)
        throw Error("extension requires covectors of an oriented matroid, got " +
                    std::string(verdict_name(base_cls.verdict)));
    if (sigma.kind == Localization::Kind::Lex)
        for (auto& [e, s] : sigma.chain) {
            (void)s;
            if (!base.ground->has(e))
                throw ElementNotFound("lexicographic rule names element " + std::to_string(e));
        }

    SignSystem coc = cocircuits(base);
    std::vector<Sign> values;
    values.reserve(coc.size());
    for (const auto& c : coc.vectors) values.push_back(sigma.value(c));
    for (size_t i = 0; i < coc.size(); ++i) {
        SignVector neg = coc.vectors[i].negated();
        auto it = std::lower_bound(coc.vectors.begin(), coc.vectors.end(), neg);
        if (it == coc.vectors.end() || !(*it == neg))
            throw Error("cocircuit set is not closed under negation");
        size_t j = static_cast<size_t>(it - coc.vectors.begin());
        if (values[j] != opposite(values[i]))
            throw InvalidLocalization("values on " + coc.vectors[i].render() + " and its negative " +
                                      "are not opposite");
    }

    GroundPtr ext_ground = base.ground->extended(new_id, std::move(new_name));
    ElementId f = 0;
    for (ElementId e : ext_ground->ids())
        if (!base.ground->has(e)) f = e;

    std::vector<SignVector> out;
    out.reserve(base.size() + base.size() / 2);
    for (const auto& z : base.vectors) {
        bool saw_plus = false, saw_minus = false;
        for (size_t i = 0; i < coc.size(); ++i) {
            if (!coc.vectors[i].conforms_to(z)) continue;
            if (values[i] == Sign::Plus) saw_plus = true;
            else if (values[i] == Sign::Minus) saw_minus = true;
        }
        if (saw_plus && saw_minus) {
            out.push_back(z.with_element(ext_ground, f, Sign::Plus));
            out.push_back(z.with_element(ext_ground, f, Sign::Minus));
            out.push_back(z.with_element(ext_ground, f, Sign::Zero));
        } else if (saw_plus || saw_minus) {
            out.push_back(z.with_element(ext_ground, f, saw_plus ? Sign::Plus : Sign::Minus));
        } else {
            out.push_back(z.with_element(ext_ground, f, Sign::Zero));
        }
    }
    SignSystem ext = SignSystem::make(ext_ground, std::move(out));

    Classification ext_cls = classify_system(ext);
    if (ext_cls.verdict != Verdict::OM)
        throw InvalidLocalization("extension is not an oriented matroid (" +
                                  std::string(verdict_name(ext_cls.verdict)) + ")");
    if (base.ground->size() > 0) {
        SignSystem back = delete_elements(ext, elem_bit(f));
        if (!(back.vectors == base.vectors))
            throw InvalidLocalization("deleting the new element does not restore the base system");
    }
    return ExtensionResult{std::move(ext), f};
}

// f is in general position when no cocircuit vanishing on f drops to a
// cocircuit of the deletion, i.e. the new element avoids all the old vertices.
inline bool is_general_position(const SignSystem& ext, ElementId f) {
    if (!ext.ground->has(f)) throw ElementNotFound("element " + std::to_string(f));
    if (ext.ground->size() == 1) return true; // nothing left to collide with
    SignSystem deleted = delete_elements(ext, elem_bit(f));
    SignSystem dcoc = cocircuits(deleted);
    for (const auto& x : cocircuits(ext).vectors) {
        if (x.at(f) != Sign::Zero) continue;
        if (dcoc.contains(x.restricted_to(deleted.ground))) return false;
    }
    return true;
}

// A corner: the topes of the base that survive when one side of the new
// element is cut away. `side` records the sign that was removed.
struct CornerRecord {
    SignSystem extension;
    ElementId element = 0;
    Sign side = Sign::Plus;
    std::vector<SignVector> corner;
};

inline CornerRecord corner_from_extension(const SignSystem& base, const SignSystem& ext,
                                          ElementId f, Sign side) {
    if (side == Sign::Zero) throw Error("corner side must be + or -");
    bool empty_base = base.ground->size() == 0;
    if (!empty_base) {
        SignSystem back = delete_elements(ext, elem_bit(f));
        if (!(back.vectors == base.vectors) || back.ground->mask() != base.ground->mask())
            throw Error("extension does not restrict to the base system");
    }
    if (!is_general_position(ext, f))
        throw NotGeneralPosition("element " + std::to_string(f) + " passes through a vertex");

    SignSystem base_topes = topes(base);
    std::set<SignVector> removed;
    for (const auto& x : topes(ext).vectors)
        if (x.at(f) == side) removed.insert(x.restricted_to(base.ground));

    std::vector<SignVector> corner, kept;
    for (const auto& t : base_topes.vectors)
        (removed.count(t) ? kept : corner).push_back(t);
    if (corner.empty()) throw NoCornerFound("every tope extends to the " +
                                            std::string(1, sign_char(side)) + " side");

    // The complement is the tope set of an affine slice and must embed
    // isometrically, which the partial-cube check certifies.
    if (!kept.empty())
        TopeGraph::build(SignSystem::make(base.ground, kept));

    TopeGraph full = TopeGraph::build(base_topes);
    std::set<uint32_t> corner_idx;
    for (const auto& t : corner) corner_idx.insert(full.index_of(t));
    for (const auto& c : full.enumerate_convex_sets()) {
        bool inside = true;
        for (uint32_t v : c.members)
            if (!corner_idx.count(v)) { inside = false; break; }
        if (!inside) continue;
        if (!is_full_convex(base, c))
            throw Error("corner contains the non-full convex set of " +
                        std::to_string(c.members.size()) + " topes");
    }

    CornerRecord r;
    r.extension = ext;
    r.element = f;
    r.side = side;
    r.corner = std::move(corner);
    return r;
}

// Deterministic corner search: try lexicographic extensions led by each
// signed element in canonical order and keep the first one in general
// position that cuts a nonempty corner.
inline CornerRecord find_corner(const SignSystem& covectors) {
    Classification cls = classify_system(covectors);
    if (cls.verdict != Verdict::OM)
        throw Error("corner search requires an oriented matroid");

    std::vector<std::vector<std::pair<ElementId, Sign>>> chains;
    if (cocircuits(covectors).empty()) {
        chains.push_back({});
    } else {
        for (ElementId lead : covectors.ground->ids())
            for (Sign s : {Sign::Plus, Sign::Minus}) {
                std::vector<std::pair<ElementId, Sign>> chain{{lead, s}};
                for (ElementId e : covectors.ground->ids())
                    if (e != lead) chain.emplace_back(e, Sign::Plus);
                chains.push_back(std::move(chain));
            }
    }

    for (auto& chain : chains) {
        ExtensionResult ext;
        try {
            ext = extend_by_localization(covectors, Localization::lex(chain));
        } catch (const InvalidLocalization&) {
            continue;
        }
        if (!is_general_position(ext.system, ext.element)) continue;
        try {
            return corner_from_extension(covectors, ext.system, ext.element, Sign::Plus);
        } catch (const NoCornerFound&) {
            continue;
        }
    }
    throw NoCornerFound("no lexicographic extension yields a corner");
}

struct RecoveredSystem {
    SignSystem system;
    Classification classification;
};

// Rebuilds the covector set from a tope set: a candidate (every zeroing of a
// tope) survives when composing it with every tope and every negated tope
// stays inside the tope set.
inline RecoveredSystem covectors_from_topes(const SignSystem& tope_set) {
    if (tope_set.empty()) throw EmptySystem("cannot recover covectors from no topes");
    for (const auto& t : tope_set.vectors)
        if (!t.full_support()) throw Error("tope " + t.render() + " lacks full support");

    std::set<SignVector> candidates;
    for (const auto& t : tope_set.vectors) {
        ElemMask supp = t.support_mask();
        ElemMask sub = supp;
        while (true) {
            candidates.insert(SignVector(tope_set.ground, t.plus_mask() & sub, t.minus_mask() & sub));
            if (sub == 0) break;
            sub = (sub - 1) & supp;
        }
    }

    std::vector<SignVector> accepted;
    for (const auto& x : candidates) {
        bool ok = true;
        for (const auto& t : tope_set.vectors) {
            if (!tope_set.contains(x.composed(t)) ||
                !tope_set.contains(x.composed(t.negated()))) { ok = false; break; }
        }
        if (ok) accepted.push_back(x);
    }
    SignSystem sys = SignSystem::make(tope_set.ground, std::move(accepted));
    Classification cls = classify_system(sys);
    if (cls.verdict == Verdict::NEITHER)
        throw RecoveryFailed("recovered covectors fail the conditional axioms");
    return RecoveredSystem{std::move(sys), cls};
}

struct PeelStage {
    SignVector witness;                    // conformal-minimal covector spanning the cell
    std::vector<SignVector> topes_before;  // tope set entering this stage
    std::vector<SignVector> cell_topes;    // topes of the chosen cell
    SignSystem cell_system;                // the cell as its own covector system
    CornerRecord record;                   // corner found inside the cell
    std::vector<SignVector> removed;       // corner topes on the full ground set
};

namespace detail {

struct CellCandidate {
    SignVector witness;
    std::vector<SignVector> cell_topes;
};

inline std::vector<CellCandidate> maximal_cells(const SignSystem& covectors,
                                                const std::vector<SignVector>& tope_set) {
    std::vector<CellCandidate> cells;
    std::vector<SignVector> minimal;
    for (const auto& x : covectors.vectors) {
        bool is_min = true;
        for (const auto& y : covectors.vectors)
            if (!(y == x) && strictly_conforms(y, x)) { is_min = false; break; }
        if (is_min) minimal.push_back(x);
    }
    std::map<std::vector<SignVector>, SignVector> by_topes;
    for (const auto& x : minimal) {
        std::vector<SignVector> cell;
        for (const auto& t : tope_set)
            if (x.conforms_to(t)) cell.push_back(t);
        auto it = by_topes.find(cell);
        if (it == by_topes.end()) by_topes.emplace(std::move(cell), x);
        else if (x < it->second) it->second = x;
    }
    for (auto& [cell, witness] : by_topes) {
        bool maximal = true;
        for (auto& [other, w2] : by_topes) {
            (void)w2;
            if (other.size() <= cell.size()) continue;
            if (std::includes(other.begin(), other.end(), cell.begin(), cell.end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) cells.push_back(CellCandidate{witness, cell});
    }
    std::sort(cells.begin(), cells.end(),
              [](const CellCandidate& a, const CellCandidate& b) { return a.witness < b.witness; });
    return cells;
}

inline std::string tope_key(const std::vector<SignVector>& ts) {
    std::string k;
    for (const auto& t : ts) {
        k += t.render();
        k += '|';
    }
    return k;
}

inline bool peel_from(const SignSystem& covectors, const std::vector<SignVector>& tope_set,
                      std::vector<PeelStage>& stages, std::set<std::string>& dead) {
    if (tope_set.empty()) return true;
    std::string key = tope_key(tope_set);
    if (dead.count(key)) return false;

    auto cells = maximal_cells(covectors, tope_set);
    for (const auto& cell : cells) {
        Upset up = upset(covectors, cell.witness);
        CornerRecord rec;
        try {
            rec = find_corner(up.reduced);
        } catch (const NoCornerFound&) {
            continue;
        } catch (const Error&) {
            continue;
        }

        GroundPtr cell_ground = up.reduced.ground;
        std::set<SignVector> corner_reduced(rec.corner.begin(), rec.corner.end());
        std::vector<SignVector> removed;
        for (const auto& t : cell.cell_topes)
            if (corner_reduced.count(t.restricted_to(cell_ground))) removed.push_back(t);
        if (removed.empty()) continue;

        size_t touched = 0;
        for (const auto& other : cells) {
            bool meets = false;
            for (const auto& t : removed)
                if (std::binary_search(other.cell_topes.begin(), other.cell_topes.end(), t)) {
                    meets = true;
                    break;
                }
            if (meets) ++touched;
        }
        if (touched != 1) continue;

        std::vector<SignVector> rest;
        std::set<SignVector> gone(removed.begin(), removed.end());
        for (const auto& t : tope_set)
            if (!gone.count(t)) rest.push_back(t);

        PeelStage stage;
        stage.witness = cell.witness;
        stage.topes_before = tope_set;
        stage.cell_topes = cell.cell_topes;
        stage.cell_system = up.reduced;
        stage.record = rec;
        stage.removed = removed;

        if (rest.empty()) {
            stages.push_back(std::move(stage));
            return true;
        }
        RecoveredSystem next;
        try {
            next = covectors_from_topes(SignSystem::make(covectors.ground, rest));
        } catch (const RecoveryFailed&) {
            continue;
        }
        stages.push_back(std::move(stage));
        if (peel_from(next.system, rest, stages, dead)) return true;
        stages.pop_back();
    }
    dead.insert(std::move(key));
    return false;
}

} // namespace detail

// Peels a conditional system corner by corner: each stage removes a corner of
// one maximal cell, where the removed topes may touch no other maximal cell,
// and the remainder must again satisfy the conditional axioms.
inline std::vector<PeelStage> com_corner_peeling(const SignSystem& covectors) {
    Classification cls = classify_system(covectors);
    if (cls.verdict == Verdict::NEITHER)
        throw Error("corner peeling requires the conditional axioms");

    std::vector<PeelStage> stages;
    std::set<std::string> dead;
    std::vector<SignVector> tope_set = topes(covectors).vectors;
    if (tope_set.empty()) throw EmptySystem("no topes to peel");
    if (!detail::peel_from(covectors, tope_set, stages, dead))
        throw NoPeelingFound("no corner peeling sequence exists");
    return stages;
}

} // namespace om
