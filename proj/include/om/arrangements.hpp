#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "axioms.hpp"
#include "rational.hpp"

namespace om {

struct RationalMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Rat> entries; // row major

    Rat& at(size_t r, size_t c) { return entries[r * cols + c]; }
    const Rat& at(size_t r, size_t c) const { return entries[r * cols + c]; }

    static RationalMatrix zero(size_t r, size_t c) {
        RationalMatrix m;
        m.rows = r;
        m.cols = c;
        m.entries.assign(r * c, Rat(0));
        return m;
    }
};

// First line "d n", then d*n entries row major, integers or p/q. '#' comments.
inline RationalMatrix parse_matrix(std::istream& in) {
    std::vector<std::string> tokens;
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = strip_comment(raw);
        for (const auto& t : split_ws(line)) tokens.push_back(t);
    }
    if (tokens.size() < 2) throw ParseError("matrix input needs a 'rows cols' header");
    size_t r, c;
    try {
        r = std::stoul(tokens[0]);
        c = std::stoul(tokens[1]);
    } catch (...) {
        throw ParseError("bad matrix header '" + tokens[0] + " " + tokens[1] + "'");
    }
    if (r == 0 || c == 0) throw ParseError("matrix dimensions must be positive");
    if (tokens.size() != 2 + r * c)
        throw ParseError("expected " + std::to_string(r * c) + " matrix entries, got " +
                         std::to_string(tokens.size() - 2));
    RationalMatrix m = RationalMatrix::zero(r, c);
    for (size_t i = 0; i < r * c; ++i) m.entries[i] = Rat::parse(tokens[2 + i]);
    return m;
}

inline RationalMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix(in);
}

inline std::string serialize_matrix(const RationalMatrix& m) {
    std::ostringstream out;
    out << m.rows << ' ' << m.cols << '\n';
    for (size_t r = 0; r < m.rows; ++r) {
        for (size_t c = 0; c < m.cols; ++c) out << (c ? " " : "") << m.at(r, c).str();
        out << '\n';
    }
    return out.str();
}

// Row echelon form by exact elimination; returns the nonzero rows.
inline RationalMatrix row_reduce(const RationalMatrix& m) {
    RationalMatrix a = m;
    size_t pivot_row = 0;
    for (size_t col = 0; col < a.cols && pivot_row < a.rows; ++col) {
        size_t sel = pivot_row;
        while (sel < a.rows && a.at(sel, col).is_zero()) ++sel;
        if (sel == a.rows) continue;
        for (size_t c = 0; c < a.cols; ++c) std::swap(a.at(pivot_row, c), a.at(sel, c));
        Rat inv = Rat(1) / a.at(pivot_row, col);
        for (size_t c = 0; c < a.cols; ++c) a.at(pivot_row, c) = a.at(pivot_row, c) * inv;
        for (size_t r = 0; r < a.rows; ++r) {
            if (r == pivot_row || a.at(r, col).is_zero()) continue;
            Rat f = a.at(r, col);
            for (size_t c = 0; c < a.cols; ++c) a.at(r, c) = a.at(r, c) - f * a.at(pivot_row, c);
        }
        ++pivot_row;
    }
    RationalMatrix out = RationalMatrix::zero(pivot_row, a.cols);
    for (size_t r = 0; r < pivot_row; ++r)
        for (size_t c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c);
    return out;
}

inline size_t matrix_rank(const RationalMatrix& m) { return row_reduce(m).rows; }

inline Rat determinant(RationalMatrix a) {
    if (a.rows != a.cols) throw Error("determinant of a non-square matrix");
    Rat det(1);
    for (size_t col = 0; col < a.cols; ++col) {
        size_t sel = col;
        while (sel < a.rows && a.at(sel, col).is_zero()) ++sel;
        if (sel == a.rows) return Rat(0);
        if (sel != col) {
            for (size_t c = 0; c < a.cols; ++c) std::swap(a.at(col, c), a.at(sel, c));
            det = -det;
        }
        det = det * a.at(col, col);
        Rat inv = Rat(1) / a.at(col, col);
        for (size_t r = col + 1; r < a.rows; ++r) {
            if (a.at(r, col).is_zero()) continue;
            Rat f = a.at(r, col) * inv;
            for (size_t c = col; c < a.cols; ++c) a.at(r, c) = a.at(r, c) - f * a.at(col, c);
        }
    }
    return det;
}

// Closure of a seed set under pairwise composition.
inline SignSystem composition_closure(const GroundPtr& ground, std::vector<SignVector> seed) {
    std::set<SignVector> done(seed.begin(), seed.end());
    std::vector<SignVector> work(done.begin(), done.end());
    while (!work.empty()) {
        SignVector x = work.back();
        work.pop_back();
        for (const auto& y : done) {
            for (const SignVector& z : {x.composed(y), y.composed(x)}) {
                if (!done.count(z)) {
                    done.insert(z);
                    work.push_back(z);
                }
            }
        }
    }
    return SignSystem::make(ground, {done.begin(), done.end()});
}

// Covector system of a configuration of rational column vectors: sign vectors
// of x against the columns. The minimal nonzero patterns come from rank r-1
// column subsets via determinants, everything else is their compositions.
inline SignSystem system_from_vectors(const RationalMatrix& v) {
    RationalMatrix red = row_reduce(v);
    size_t r = red.rows;
    if (r == 0) throw DegenerateInput("all vectors are zero");
    size_t n = v.cols;
    if (n > kMaxElements) throw Error("too many columns");
    GroundPtr ground = GroundSet::range(static_cast<unsigned>(n));
    std::vector<SignVector> cocircs;
    // iterate over (r-1)-subsets of columns
    std::vector<size_t> idx(r - 1);
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    bool more = true;
    auto advance = [&]() {
        size_t k = idx.size();
        if (k == 0) return false;
        size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] + (k - i) < n) {
                ++idx[i];
                for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    while (more) {
        RationalMatrix sq = RationalMatrix::zero(r, r);
        for (size_t c = 0; c + 1 < r; ++c)
            for (size_t row = 0; row < r; ++row) sq.at(row, c) = red.at(row, idx[c]);
        // skip dependent column choices; independent ones reach every hyperplane
        if (r >= 2) {
            RationalMatrix part = RationalMatrix::zero(r, r - 1);
            for (size_t c = 0; c + 1 < r; ++c)
                for (size_t row = 0; row < r; ++row) part.at(row, c) = red.at(row, idx[c]);
            if (matrix_rank(part) + 1 != r) {
                more = advance();
                continue;
            }
        }
        ElemMask p = 0, m = 0;
        for (size_t j = 0; j < n; ++j) {
            for (size_t row = 0; row < r; ++row) sq.at(row, r - 1) = red.at(row, j);
            int s = determinant(sq).sign();
            if (s > 0) p |= elem_bit(static_cast<ElementId>(j));
            if (s < 0) m |= elem_bit(static_cast<ElementId>(j));
        }
        if (p | m) {
            cocircs.emplace_back(ground, p, m);
            cocircs.emplace_back(ground, m, p);
        }
        more = advance();
    }
    cocircs.push_back(SignVector::zero(ground));
    return composition_closure(ground, std::move(cocircs));
}

inline OrientedStructure om_from_vectors(const RationalMatrix& v) {
    return analyze(system_from_vectors(v));
}

struct AffineInstance {
    OrientedStructure om;
    ElementId g = 0;
};

// Points a_i with offsets b_i define hyperplanes <x, a_i> = b_i; homogenize
// with a last coordinate and adjoin the hyperplane at infinity as element g.
inline AffineInstance affine_from_points(const RationalMatrix& points, const std::vector<Rat>& offsets) {
    if (points.cols != offsets.size()) throw DegenerateInput("one offset per point required");
    RationalMatrix v = RationalMatrix::zero(points.rows + 1, points.cols + 1);
    for (size_t r = 0; r < points.rows; ++r)
        for (size_t c = 0; c < points.cols; ++c) v.at(r, c) = points.at(r, c);
    for (size_t c = 0; c < points.cols; ++c) v.at(points.rows, c) = -offsets[c];
    v.at(points.rows, points.cols) = Rat(1);
    AffineInstance a;
    a.om = om_from_vectors(v);
    a.g = static_cast<ElementId>(points.cols);
    return a;
}

struct NamedInstance {
    std::string key;
    OrientedStructure structure;
    std::optional<ElementId> g; // set for affine instances
    std::string notes;
};

namespace detail {
inline std::optional<long> parse_keyed(const std::string& key, const std::string& name) {
    if (key.rfind(name + "(", 0) != 0 || key.back() != ')') return std::nullopt;
    std::string inner = key.substr(name.size() + 1, key.size() - name.size() - 2);
    try {
        size_t used = 0;
        long v = std::stol(inner, &used);
        if (used != inner.size()) return std::nullopt;
        return v;
    } catch (...) {
        return std::nullopt;
    }
}
} // namespace detail

// Deterministic test instances, keyed by a short text name.
inline NamedInstance named_instance(const std::string& key) {
    NamedInstance out;
    out.key = key;
    auto lines_through = [&](const std::vector<long>& ps) {
        RationalMatrix v = RationalMatrix::zero(2, ps.size());
        for (size_t i = 0; i < ps.size(); ++i) {
            v.at(0, i) = Rat(1);
            v.at(1, i) = Rat(-ps[i]);
        }
        return v;
    };
    if (key == "paper4") {
        out.structure = om_from_vectors(lines_through({1, 2, 3, 4}));
        out.notes = "four distinct line directions, an 8-cycle tope graph";
        return out;
    }
    if (auto n = detail::parse_keyed(key, "cycle")) {
        if (*n < 2 || *n > 12) throw UnknownKey("cycle(n) supports 2 <= n <= 12");
        std::vector<long> ps(static_cast<size_t>(*n));
        for (long i = 0; i < *n; ++i) ps[static_cast<size_t>(i)] = i + 1;
        out.structure = om_from_vectors(lines_through(ps));
        out.notes = "n distinct line directions, a 2n-cycle tope graph";
        return out;
    }
    if (auto n = detail::parse_keyed(key, "cube")) {
        if (*n < 1 || *n > 6) throw UnknownKey("cube(n) supports 1 <= n <= 6");
        RationalMatrix v = RationalMatrix::zero(static_cast<size_t>(*n), static_cast<size_t>(*n));
        for (long i = 0; i < *n; ++i) v.at(static_cast<size_t>(i), static_cast<size_t>(i)) = Rat(1);
        out.structure = om_from_vectors(v);
        out.notes = "coordinate hyperplanes, every sign vector is a covector";
        return out;
    }
    if (key == "tri") {
        RationalMatrix pts = RationalMatrix::zero(2, 3);
        pts.at(0, 0) = Rat(1); // x = 0
        pts.at(1, 1) = Rat(1); // y = 0
        pts.at(0, 2) = Rat(1); // x + y = 1
        pts.at(1, 2) = Rat(1);
        auto a = affine_from_points(pts, {Rat(0), Rat(0), Rat(1)});
        out.structure = a.om;
        out.g = a.g;
        out.notes = "three generic affine lines, seven regions";
        return out;
    }
    if (auto k = detail::parse_keyed(key, "path")) {
        if (*k < 2 || *k > 12) throw UnknownKey("path(k) supports 2 <= k <= 12");
        RationalMatrix pts = RationalMatrix::zero(1, static_cast<size_t>(*k - 1));
        std::vector<Rat> offs;
        for (long i = 1; i < *k; ++i) {
            pts.at(0, static_cast<size_t>(i - 1)) = Rat(1);
            offs.push_back(Rat(i));
        }
        auto a = affine_from_points(pts, offs);
        out.structure = a.om;
        out.g = a.g;
        out.notes = "points on a line, a k-vertex path tope graph";
        return out;
    }
    if (key.rfind("unif(3,", 0) == 0 && key.back() == ')') {
        std::string inner = key.substr(7, key.size() - 8);
        long n = 0;
        try {
            size_t used = 0;
            n = std::stol(inner, &used);
            if (used != inner.size()) throw ParseError("");
        } catch (...) {
            throw UnknownKey("instance '" + key + "'");
        }
        if (n < 3 || n > 6) throw UnknownKey("unif(3,n) supports 3 <= n <= 6");
        RationalMatrix v = RationalMatrix::zero(3, static_cast<size_t>(n));
        for (long t = 1; t <= n; ++t) {
            v.at(0, static_cast<size_t>(t - 1)) = Rat(1);
            v.at(1, static_cast<size_t>(t - 1)) = Rat(t);
            v.at(2, static_cast<size_t>(t - 1)) = Rat(t * t);
        }
        out.structure = om_from_vectors(v);
        out.notes = "moment curve directions, uniform of rank three";
        return out;
    }
    throw UnknownKey("instance '" + key + "'");
}

} // namespace om
