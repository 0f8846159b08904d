#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "axioms.hpp"

namespace om {

// A set of vertices of a tope graph, closed under the halfspace description:
// members carry the graph's vertex indices, osc holds the coordinates flipped
// by edges leaving the set, cross those flipped inside it. For a convex set
// the two are disjoint and the osc halfspaces alone cut the set out.
struct ConvexSet {
    std::vector<uint32_t> members;
    ElemMask osc = 0;
    ElemMask cross = 0;
    ElemMask side_plus = 0;  // side of each osc element containing the set
    ElemMask side_minus = 0;

    size_t size() const { return members.size(); }
    bool operator==(const ConvexSet& o) const { return members == o.members; }
    bool operator<(const ConvexSet& o) const { return members < o.members; }
};

class TopeGraph {
public:
    // Vertices are full-support vectors; edges join vectors differing in one
    // coordinate. Breadth-first distances must agree with Hamming distances.
    static TopeGraph build(SignSystem vertex_set) {
        if (vertex_set.empty()) throw EmptySystem("tope graph needs at least one vertex");
        for (const auto& t : vertex_set.vectors)
            if (!t.full_support()) throw Error("tope graph vertex " + t.render() + " lacks full support");
        TopeGraph g;
        g.topes_ = std::move(vertex_set);
        size_t n = g.topes_.size();
        g.adj_.assign(n, {});
        g.edge_label_.assign(n, {});
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                ElemMask sep = g.topes_.vectors[i].separator_mask(g.topes_.vectors[j]);
                if (std::popcount(sep) == 1) {
                    auto e = static_cast<ElementId>(std::countr_zero(sep));
                    g.adj_[i].push_back(static_cast<uint32_t>(j));
                    g.adj_[j].push_back(static_cast<uint32_t>(i));
                    g.edge_label_[i].push_back(e);
                    g.edge_label_[j].push_back(e);
                }
            }
        g.dist_.assign(n, std::vector<int>(n, -1));
        for (size_t s = 0; s < n; ++s) {
            auto& d = g.dist_[s];
            d[s] = 0;
            std::deque<uint32_t> q{static_cast<uint32_t>(s)};
            while (!q.empty()) {
                uint32_t u = q.front();
                q.pop_front();
                for (uint32_t v : g.adj_[u])
                    if (d[v] < 0) {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
            }
        }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                int hamming = std::popcount(g.topes_.vectors[i].separator_mask(g.topes_.vectors[j]));
                if (g.dist_[i][j] != hamming)
                    throw NotPartialCube("vertices " + g.topes_.vectors[i].render() + " and " +
                                         g.topes_.vectors[j].render() + " at graph distance " +
                                         std::to_string(g.dist_[i][j]) + ", Hamming distance " +
                                         std::to_string(hamming));
            }
        return g;
    }

    const SignSystem& topes() const { return topes_; }
    const GroundPtr& ground() const { return topes_.ground; }
    size_t order() const { return topes_.size(); }
    const std::vector<uint32_t>& neighbors(uint32_t v) const { return adj_[v]; }
    int distance(uint32_t u, uint32_t v) const { return dist_[u][v]; }

    const SignVector& vertex(uint32_t v) const { return topes_.vectors[v]; }

    uint32_t index_of(const SignVector& t) const {
        auto it = std::lower_bound(topes_.vectors.begin(), topes_.vectors.end(), t);
        if (it == topes_.vectors.end() || !(*it == t)) throw VectorNotInSystem(t.render());
        return static_cast<uint32_t>(it - topes_.vectors.begin());
    }

    bool has_vertex(const SignVector& t) const {
        auto it = std::lower_bound(topes_.vectors.begin(), topes_.vectors.end(), t);
        return it != topes_.vectors.end() && *it == t;
    }

    std::vector<uint32_t> halfspace(ElementId e, Sign s) const {
        std::vector<uint32_t> out;
        for (uint32_t v = 0; v < order(); ++v)
            if (vertex(v).at(e) == s) out.push_back(v);
        return out;
    }

    // Fills osc/cross/side data for a member set, without deciding convexity.
    ConvexSet annotate(std::vector<uint32_t> members) const {
        ConvexSet c;
        c.members = std::move(members);
        std::vector<bool> in(order(), false);
        for (uint32_t v : c.members) in[v] = true;
        for (uint32_t v : c.members)
            for (size_t k = 0; k < adj_[v].size(); ++k) {
                ElemMask bit = elem_bit(edge_label_[v][k]);
                if (in[adj_[v][k]])
                    c.cross |= bit;
                else
                    c.osc |= bit;
            }
        c.osc &= ~c.cross;
        for (ElementId e : mask_elements(c.osc)) {
            Sign s = vertex(c.members.front()).at(e);
            bool constant = true;
            for (uint32_t v : c.members)
                if (vertex(v).at(e) != s) { constant = false; break; }
            if (!constant) {
                // both signs touch boundary edges of e: not one-sided
                c.osc &= ~elem_bit(e);
                c.cross |= elem_bit(e);
                continue;
            }
            if (s == Sign::Plus) c.side_plus |= elem_bit(e);
            else c.side_minus |= elem_bit(e);
        }
        return c;
    }

    // Vertices whose sign pattern extends the sample (zero entries are free).
    std::vector<uint32_t> matching(const SignVector& sample) const {
        require_same_ground(ground(), sample.ground());
        std::vector<uint32_t> out;
        for (uint32_t v = 0; v < order(); ++v)
            if (sample.conforms_to(vertex(v))) out.push_back(v);
        return out;
    }

    ConvexSet convex_from_sample(const SignVector& sample) const {
        auto members = matching(sample);
        if (members.empty()) throw UnrealizableSample("sample " + sample.render() + " matches no vertex");
        return annotate(std::move(members));
    }

    // The convex hull test: the set must equal the vertices matching its
    // constant coordinates.
    ConvexSet convex_from_members(std::vector<uint32_t> members) const {
        if (members.empty()) throw Error("convex sets are nonempty here");
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        SignVector pattern = constant_pattern(members);
        auto hull = matching(pattern);
        if (hull != members)
            throw Error("vertex set is not convex: hull has " + std::to_string(hull.size()) +
                        " vertices, set has " + std::to_string(members.size()));
        return annotate(std::move(members));
    }

    ConvexSet intersect(const ConvexSet& c, const std::vector<uint32_t>& sorted_vertices) const {
        std::vector<uint32_t> out;
        std::set_intersection(c.members.begin(), c.members.end(), sorted_vertices.begin(),
                              sorted_vertices.end(), std::back_inserter(out));
        if (out.empty()) throw Error("empty intersection");
        return annotate(std::move(out));
    }

    // All nonempty convex sets: close the full vertex set under halfspace
    // intersections.
    std::vector<ConvexSet> enumerate_convex_sets() const {
        std::set<std::vector<uint32_t>> seen;
        std::deque<std::vector<uint32_t>> queue;
        std::vector<uint32_t> all(order());
        for (uint32_t v = 0; v < order(); ++v) all[v] = v;
        seen.insert(all);
        queue.push_back(all);
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (ElementId e : ground()->ids())
                for (Sign s : {Sign::Plus, Sign::Minus}) {
                    std::vector<uint32_t> next;
                    for (uint32_t v : cur)
                        if (vertex(v).at(e) == s) next.push_back(v);
                    if (next.empty() || next.size() == cur.size()) continue;
                    if (seen.insert(next).second) queue.push_back(next);
                }
        }
        std::vector<ConvexSet> out;
        out.reserve(seen.size());
        for (const auto& m : seen) out.push_back(annotate(m));
        std::sort(out.begin(), out.end(), [](const ConvexSet& a, const ConvexSet& b) {
            if (a.size() != b.size()) return a.size() > b.size();
            return a.members < b.members;
        });
        return out;
    }

    bool is_shattered(ElemMask w) const {
        size_t want = size_t{1} << std::popcount(w);
        if (want > order()) return false;
        std::vector<ElemMask> pats;
        pats.reserve(order());
        for (const auto& t : topes_.vectors) pats.push_back(t.plus_mask() & w);
        std::sort(pats.begin(), pats.end());
        pats.erase(std::unique(pats.begin(), pats.end()), pats.end());
        return pats.size() == want;
    }

    // Every subset the vertex set shatters, empty set included. Shattering is
    // downward closed, so grow by popcount.
    std::vector<ElemMask> shattered_family() const {
        if (ground()->size() > 20) throw Error("ground set too large to enumerate shattered sets");
        std::set<ElemMask> family{0};
        std::vector<ElemMask> frontier{0};
        while (!frontier.empty()) {
            std::vector<ElemMask> next;
            for (ElemMask w : frontier)
                for (ElementId e : ground()->ids()) {
                    ElemMask cand = w | elem_bit(e);
                    if (cand == w || family.count(cand)) continue;
                    if (is_shattered(cand)) {
                        family.insert(cand);
                        next.push_back(cand);
                    }
                }
            frontier = std::move(next);
        }
        return {family.begin(), family.end()};
    }

    unsigned vc_dimension() const {
        unsigned best = 0;
        for (ElemMask w : shattered_family())
            best = std::max(best, static_cast<unsigned>(std::popcount(w)));
        return best;
    }

private:
    SignVector constant_pattern(const std::vector<uint32_t>& members) const {
        ElemMask p = vertex(members.front()).plus_mask();
        ElemMask m = vertex(members.front()).minus_mask();
        for (uint32_t v : members) {
            p &= vertex(v).plus_mask();
            m &= vertex(v).minus_mask();
        }
        return SignVector(ground(), p, m);
    }

    SignSystem topes_;
    std::vector<std::vector<uint32_t>> adj_;
    std::vector<std::vector<ElementId>> edge_label_;
    std::vector<std::vector<int>> dist_;
};

// Rank stays put when the coordinates crossing C are deleted. Subsets of a
// corner always pass this; it gates the direct convex-to-label map.
inline bool is_full_convex(const SignSystem& covectors, const ConvexSet& c) {
    if (!c.cross) return true;
    if (c.cross == covectors.ground->mask()) return false;
    return rank_of(delete_elements(covectors, c.cross)) == rank_of(covectors);
}

} // namespace om
