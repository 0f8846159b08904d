#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace om {

using ElementId = unsigned;
constexpr unsigned kMaxElements = 64;

enum class Sign : uint8_t { Minus, Zero, Plus };

inline Sign opposite(Sign s) {
    if (s == Sign::Plus) return Sign::Minus;
    if (s == Sign::Minus) return Sign::Plus;
    return Sign::Zero;
}

inline char sign_char(Sign s) {
    return s == Sign::Plus ? '+' : s == Sign::Minus ? '-' : '0';
}

inline Sign sign_from_char(char c) {
    if (c == '+') return Sign::Plus;
    if (c == '-') return Sign::Minus;
    if (c == '0') return Sign::Zero;
    throw ParseError(std::string("bad sign character '") + c + "'");
}

// Canonical order of signs: '+' < '-' < '0'.
inline int sign_rank(Sign s) {
    return s == Sign::Plus ? 0 : s == Sign::Minus ? 1 : 2;
}

// Set of element ids as a bitmask. Ids are stable: minors and restrictions
// keep each element's id (and bit position), so masks never need translation.
using ElemMask = uint64_t;

inline ElemMask elem_bit(ElementId e) {
    if (e >= kMaxElements) throw Error("element id " + std::to_string(e) + " out of range");
    return ElemMask{1} << e;
}

inline std::vector<ElementId> mask_elements(ElemMask m) {
    std::vector<ElementId> out;
    while (m) {
        out.push_back(static_cast<ElementId>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

class GroundSet;
using GroundPtr = std::shared_ptr<const GroundSet>;

class GroundSet {
public:
    static GroundPtr make(std::vector<ElementId> ids, std::vector<std::string> names = {}) {
        auto g = std::make_shared<GroundSet>();
        g->ids_ = std::move(ids);
        for (size_t i = 1; i < g->ids_.size(); ++i)
            if (g->ids_[i - 1] >= g->ids_[i]) throw Error("ground set ids must be strictly increasing");
        for (ElementId e : g->ids_) g->mask_ |= elem_bit(e);
        if (names.empty()) {
            for (ElementId e : g->ids_) g->names_.push_back(std::to_string(e));
        } else {
            if (names.size() != g->ids_.size()) throw Error("one name per element required");
            g->names_ = std::move(names);
        }
        return g;
    }

    static GroundPtr range(unsigned n) {
        std::vector<ElementId> ids(n);
        for (unsigned i = 0; i < n; ++i) ids[i] = i;
        return make(std::move(ids));
    }

    const std::vector<ElementId>& ids() const { return ids_; }
    size_t size() const { return ids_.size(); }
    ElemMask mask() const { return mask_; }
    bool has(ElementId e) const { return e < kMaxElements && (mask_ & elem_bit(e)); }

    size_t index_of(ElementId e) const {
        if (!has(e)) throw ElementNotFound("id " + std::to_string(e));
        return static_cast<size_t>(std::popcount(mask_ & (elem_bit(e) - 1)));
    }

    const std::string& name_of(ElementId e) const { return names_[index_of(e)]; }

    std::optional<ElementId> find_name(const std::string& name) const {
        for (size_t i = 0; i < ids_.size(); ++i)
            if (names_[i] == name) return ids_[i];
        return std::nullopt;
    }

    // Sub-ground on the ids selected by keep (names preserved).
    GroundPtr restricted(ElemMask keep) const {
        std::vector<ElementId> ids;
        std::vector<std::string> names;
        for (size_t i = 0; i < ids_.size(); ++i)
            if (mask_ & keep & elem_bit(ids_[i])) {
                ids.push_back(ids_[i]);
                names.push_back(names_[i]);
            }
        return make(std::move(ids), std::move(names));
    }

    GroundPtr without(ElemMask drop) const { return restricted(mask_ & ~drop); }

    // Ground extended by a fresh element (id defaults to max+1).
    GroundPtr extended(std::optional<ElementId> id = std::nullopt, std::string name = {}) const {
        ElementId e = id.value_or(ids_.empty() ? 0 : ids_.back() + 1);
        if (has(e)) throw Error("element id " + std::to_string(e) + " already present");
        std::vector<ElementId> ids = ids_;
        std::vector<std::string> names = names_;
        size_t pos = 0;
        while (pos < ids.size() && ids[pos] < e) ++pos;
        ids.insert(ids.begin() + static_cast<long>(pos), e);
        names.insert(names.begin() + static_cast<long>(pos), name.empty() ? std::to_string(e) : std::move(name));
        return make(std::move(ids), std::move(names));
    }

private:
    std::vector<ElementId> ids_;
    std::vector<std::string> names_;
    ElemMask mask_ = 0;
};

inline void require_same_ground(const GroundPtr& a, const GroundPtr& b) {
    if (a->mask() != b->mask()) throw GroundMismatch("operands live on different ground sets");
}

// Sign vector over a ground set, stored as one bitmask per nonzero sign.
// Bit positions are element ids, not indices, so restriction is a mask AND.
class SignVector {
public:
    SignVector() = default;
    SignVector(GroundPtr ground, ElemMask plus, ElemMask minus)
        : ground_(std::move(ground)), plus_(plus & ground_->mask()), minus_(minus & ground_->mask()) {
        if (plus_ & minus_) throw Error("sign vector with overlapping +/- supports");
    }

    static SignVector zero(GroundPtr ground) { return SignVector(std::move(ground), 0, 0); }

    static SignVector from_token(const GroundPtr& ground, const std::string& token) {
        if (token.size() != ground->size())
            throw ParseError("token '" + token + "' has " + std::to_string(token.size()) +
                             " signs, ground set has " + std::to_string(ground->size()));
        ElemMask p = 0, m = 0;
        for (size_t i = 0; i < token.size(); ++i) {
            Sign s = sign_from_char(token[i]);
            ElemMask bit = elem_bit(ground->ids()[i]);
            if (s == Sign::Plus) p |= bit;
            else if (s == Sign::Minus) m |= bit;
        }
        return SignVector(ground, p, m);
    }

    const GroundPtr& ground() const { return ground_; }
    ElemMask plus_mask() const { return plus_; }
    ElemMask minus_mask() const { return minus_; }
    ElemMask support_mask() const { return plus_ | minus_; }
    ElemMask zero_mask() const { return ground_->mask() & ~support_mask(); }

    Sign at(ElementId e) const {
        ElemMask bit = elem_bit(e);
        if (!(ground_->mask() & bit)) throw ElementNotFound("id " + std::to_string(e));
        if (plus_ & bit) return Sign::Plus;
        if (minus_ & bit) return Sign::Minus;
        return Sign::Zero;
    }

    bool is_zero() const { return support_mask() == 0; }
    bool full_support() const { return support_mask() == ground_->mask(); }

    SignVector negated() const { return SignVector(ground_, minus_, plus_); }

    // (X o Y)_e = X_e if nonzero, else Y_e.
    SignVector composed(const SignVector& y) const {
        require_same_ground(ground_, y.ground_);
        ElemMask supp = support_mask();
        return SignVector(ground_, plus_ | (y.plus_ & ~supp), minus_ | (y.minus_ & ~supp));
    }

    ElemMask separator_mask(const SignVector& y) const {
        require_same_ground(ground_, y.ground_);
        return (plus_ & y.minus_) | (minus_ & y.plus_);
    }

    // Conformal order: X <= Y iff X_e in {0, Y_e} everywhere.
    bool conforms_to(const SignVector& y) const {
        require_same_ground(ground_, y.ground_);
        return (plus_ & ~y.plus_) == 0 && (minus_ & ~y.minus_) == 0;
    }

    SignVector restricted_to(const GroundPtr& sub) const {
        if (sub->mask() & ~ground_->mask()) throw GroundMismatch("restriction target is not a subset");
        return SignVector(sub, plus_ & sub->mask(), minus_ & sub->mask());
    }

    SignVector with_element(const GroundPtr& super, ElementId e, Sign s) const {
        if ((super->mask() & ~elem_bit(e)) != ground_->mask() || !super->has(e))
            throw GroundMismatch("extension ground must add exactly the new element");
        ElemMask p = plus_, m = minus_;
        if (s == Sign::Plus) p |= elem_bit(e);
        if (s == Sign::Minus) m |= elem_bit(e);
        return SignVector(super, p, m);
    }

    std::string render() const {
        std::string out;
        out.reserve(ground_->size());
        for (ElementId e : ground_->ids()) out.push_back(sign_char(at(e)));
        return out;
    }

    bool operator==(const SignVector& o) const {
        return ground_->mask() == o.ground_->mask() && plus_ == o.plus_ && minus_ == o.minus_;
    }
    bool operator!=(const SignVector& o) const { return !(*this == o); }

    // Canonical order: lexicographic in '+' < '-' < '0' over ascending ids.
    bool operator<(const SignVector& o) const {
        require_same_ground(ground_, o.ground_);
        for (ElementId e : ground_->ids()) {
            int a = sign_rank(at(e)), b = sign_rank(o.at(e));
            if (a != b) return a < b;
        }
        return false;
    }

private:
    GroundPtr ground_;
    ElemMask plus_ = 0;
    ElemMask minus_ = 0;
};

} // namespace om
