#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "om/program.hpp"

namespace om {

// Orders element subsets by their sorted id sequences, so {0,3} < {1,2} and a
// proper prefix comes first. "Canonically smallest" below always means this.
inline bool canonical_mask_less(ElemMask a, ElemMask b) {
    while (a && b) {
        int ea = std::countr_zero(a), eb = std::countr_zero(b);
        if (ea != eb) return ea < eb;
        a &= a - 1;
        b &= b - 1;
    }
    return b != 0;
}

inline std::string render_mask(ElemMask m) {
    std::string out = "{";
    for (ElementId e : mask_elements(m)) {
        if (out.size() > 1) out += ',';
        out += std::to_string(e);
    }
    return out + "}";
}

// Assigns to every convex vertex set of a tope graph a set of boundary labels.
// Two conditions make the assignment reconstructible: each image lies in
// osc(C), and all convex sets sharing an image have a common vertex. The
// witnesses table (canonical vertex per image) is filled by the verifier,
// trace records how the map was put together.
struct ReconstructibleMap {
    std::shared_ptr<const TopeGraph> graph;
    std::map<std::vector<uint32_t>, ElemMask> table;
    std::map<ElemMask, SignVector> witnesses;
    std::vector<std::string> trace;

    ElemMask image_of_members(const std::vector<uint32_t>& members) const {
        auto it = table.find(members);
        if (it == table.end()) throw UnknownKey("no image stored for a vertex set of size " +
                                                std::to_string(members.size()));
        return it->second;
    }

    // Accepts vertices written over any ground set extending this graph's:
    // coordinates outside it are dropped, duplicates collapse.
    ElemMask image_of(const std::vector<SignVector>& vertices) const {
        if (vertices.empty()) throw Error("image of an empty vertex set is undefined");
        std::set<uint32_t> idx;
        for (const auto& v : vertices)
            idx.insert(graph->index_of(v.restricted_to(graph->ground())));
        return image_of_members({idx.begin(), idx.end()});
    }
};

struct VerifyReport {
    bool total = true;             // domain is exactly the family of convex sets
    bool images_in_osc = true;     // a(C) uses only boundary labels of C
    bool images_shattered = true;  // every image is shattered by the graph
    bool sizes_ok = true;          // no image exceeds the VC dimension
    bool fibers_meet = true;       // sets sharing an image share a vertex
    std::vector<std::string> problems;

    bool ok() const { return total && images_in_osc && images_shattered && sizes_ok && fibers_meet; }
};

namespace detail {

inline void report_problem(VerifyReport& r, std::string msg) {
    if (r.problems.size() < 24) r.problems.push_back(std::move(msg));
}

inline std::vector<uint32_t> intersect_sorted(const std::vector<uint32_t>& a,
                                              const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace detail

// Checks the two reconstruction conditions against the full convex family and
// fills in the witnesses: for each image, the canonically smallest vertex
// common to all convex sets carrying it.
inline VerifyReport verify_reconstructible(ReconstructibleMap& m) {
    if (!m.graph) throw Error("map has no tope graph attached");
    VerifyReport r;
    const TopeGraph& g = *m.graph;
    unsigned vc = g.vc_dimension();
    auto convex = g.enumerate_convex_sets();

    std::set<std::vector<uint32_t>> domain;
    for (const auto& c : convex) domain.insert(c.members);
    for (const auto& [key, img] : m.table)
        if (!domain.count(key)) {
            r.total = false;
            detail::report_problem(r, "table entry " + render_mask(img) + " keyed by a non-convex set");
        }

    std::map<ElemMask, std::vector<uint32_t>> fiber;
    std::set<ElemMask> checked;
    for (const auto& c : convex) {
        auto it = m.table.find(c.members);
        if (it == m.table.end()) {
            r.total = false;
            detail::report_problem(r, "no image for a convex set of size " + std::to_string(c.size()));
            continue;
        }
        ElemMask img = it->second;
        if (img & ~c.osc) {
            r.images_in_osc = false;
            detail::report_problem(r, "image " + render_mask(img) + " leaves the boundary labels " +
                                          render_mask(c.osc));
        }
        if (std::popcount(img) > static_cast<int>(vc)) {
            r.sizes_ok = false;
            detail::report_problem(r, "image " + render_mask(img) + " exceeds VC dimension " +
                                          std::to_string(vc));
        }
        if (checked.insert(img).second && !g.is_shattered(img)) {
            r.images_shattered = false;
            detail::report_problem(r, "image " + render_mask(img) + " is not shattered");
        }
        auto f = fiber.find(img);
        if (f == fiber.end())
            fiber.emplace(img, c.members);
        else
            f->second = detail::intersect_sorted(f->second, c.members);
    }

    m.witnesses.clear();
    for (const auto& [img, common] : fiber) {
        if (common.empty()) {
            r.fibers_meet = false;
            detail::report_problem(r, "sets labeled " + render_mask(img) + " have no common vertex");
        } else {
            m.witnesses.emplace(img, g.vertex(common.front()));
        }
    }
    return r;
}

// Injective labeling of the convex subsets of a corner: each gets a distinct
// shattered label set of full VC size drawn from its own boundary.
struct CornerMap {
    std::shared_ptr<const TopeGraph> graph;
    CornerRecord corner;
    std::map<std::vector<uint32_t>, ElemMask> table;
};

// Greedy assignment in decreasing size order with backtracking: every convex
// subset of the corner takes the canonically smallest unused candidate. All
// of them must be full convex sets of the ambient system, checked up front.
//
// Distinct labels for every subset are not always available. A corner of a
// rank-3 system is a path of topes, and its subpaths quickly outnumber the
// shattered triples of the ground set: a 3-tope corner over 4 elements packs
// five convex subsets against four available triples. When the strict
// search fails, a second pass permits a label to repeat, but only across sets
// that still share a common vertex. Shared labels then keep a well-defined
// witness, which is the property the decompressor actually relies on, and
// disjoint sets can never end up with the same label in either pass.
inline CornerMap build_corner_map(const SignSystem& covectors, const CornerRecord& rec,
                                  std::shared_ptr<const TopeGraph> graph = {}) {
    if (!graph) graph = std::make_shared<const TopeGraph>(TopeGraph::build(topes(covectors)));
    unsigned vc = graph->vc_dimension();

    std::vector<uint32_t> corner_verts;
    corner_verts.reserve(rec.corner.size());
    for (const auto& t : rec.corner) corner_verts.push_back(graph->index_of(t));
    std::sort(corner_verts.begin(), corner_verts.end());

    std::vector<ConvexSet> inside;
    for (const auto& c : graph->enumerate_convex_sets())
        if (std::includes(corner_verts.begin(), corner_verts.end(), c.members.begin(), c.members.end()))
            inside.push_back(c);
    for (const auto& c : inside)
        if (!is_full_convex(covectors, c))
            throw Error("corner contains a non-full convex set at " +
                        graph->vertex(c.members.front()).render());
    std::sort(inside.begin(), inside.end(), [](const ConvexSet& a, const ConvexSet& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.members < b.members;
    });

    std::vector<ElemMask> labels;
    for (ElemMask w : graph->shattered_family())
        if (std::popcount(w) == static_cast<int>(vc)) labels.push_back(w);
    std::sort(labels.begin(), labels.end(), canonical_mask_less);

    std::vector<std::vector<ElemMask>> cands(inside.size());
    for (size_t i = 0; i < inside.size(); ++i)
        for (ElemMask w : labels)
            if (!(w & ~inside[i].osc)) cands[i].push_back(w);

    std::vector<size_t> pick(inside.size() + 1, 0);
    std::vector<ElemMask> chosen(inside.size(), 0);
    std::map<ElemMask, unsigned> used;

    auto admissible = [&](size_t level, ElemMask w, bool reuse_ok) {
        auto u = used.find(w);
        if (u == used.end() || u->second == 0) return true;
        if (!reuse_ok) return false;
        std::vector<uint32_t> common = inside[level].members;
        for (size_t j = 0; j < level && !common.empty(); ++j)
            if (chosen[j] == w) common = detail::intersect_sorted(common, inside[j].members);
        return !common.empty();
    };

    auto search = [&](bool reuse_ok) {
        std::fill(pick.begin(), pick.end(), size_t{0});
        used.clear();
        size_t level = 0;
        while (level < inside.size()) {
            size_t j = pick[level];
            while (j < cands[level].size() && !admissible(level, cands[level][j], reuse_ok)) ++j;
            if (j < cands[level].size()) {
                chosen[level] = cands[level][j];
                ++used[chosen[level]];
                pick[level] = j;
                ++level;
                pick[level] = 0;
            } else {
                if (level == 0) return false;
                --level;
                --used[chosen[level]];
                ++pick[level];
            }
        }
        return true;
    };

    if (!search(false) && !search(true))
        throw SearchExhausted("corner of size " + std::to_string(rec.corner.size()) +
                              " admits no labeling with intersecting fibers");

    CornerMap cm;
    cm.graph = graph;
    cm.corner = rec;
    for (size_t i = 0; i < inside.size(); ++i) cm.table[inside[i].members] = chosen[i];
    return cm;
}

// Combines a map on the graph minus a corner with a fresh corner map: convex
// sets reaching past the corner inherit the inner image, sets inside the
// corner get their own full-size label set. The two image ranges stay apart
// by size, which is what keeps the combination reconstructible.
inline ReconstructibleMap extend_map(const SignSystem& covectors, const CornerRecord& rec,
                                     const ReconstructibleMap& inner) {
    auto graph = std::make_shared<const TopeGraph>(TopeGraph::build(topes(covectors)));
    unsigned vc = graph->vc_dimension();
    CornerMap cm = build_corner_map(covectors, rec, graph);

    std::set<uint32_t> corner_verts;
    for (const auto& t : rec.corner) corner_verts.insert(graph->index_of(t));

    ReconstructibleMap out;
    out.graph = graph;
    for (const auto& c : graph->enumerate_convex_sets()) {
        std::vector<SignVector> live;
        for (uint32_t v : c.members)
            if (!corner_verts.count(v)) live.push_back(graph->vertex(v));
        ElemMask img;
        if (!live.empty()) {
            img = inner.image_of(live);
            if (std::popcount(img) >= static_cast<int>(vc))
                throw ImageCollision("full-size image " + render_mask(img) +
                                     " appeared away from the corner");
        } else {
            img = cm.table.at(c.members);
        }
        out.table[c.members] = img;
    }
    out.trace.push_back("extend corner=" + std::to_string(rec.corner.size()) +
                        " convex=" + std::to_string(out.table.size()) +
                        " vc=" + std::to_string(vc));
    out.trace.insert(out.trace.end(), inner.trace.begin(), inner.trace.end());
    return out;
}

// One shared cache for all recursive sub-builds of a map construction, keyed
// by the covector system together with its distinguished element.
struct BuildSession {
    std::map<std::string, std::shared_ptr<const ReconstructibleMap>> cache;
    unsigned programs = 0;
    unsigned reused = 0;
};

namespace detail {

inline std::string affine_key(const SignSystem& s, ElementId g) {
    std::ostringstream out;
    for (ElementId e : s.ground->ids()) out << e << ',';
    out << "|" << g << "|";
    for (const auto& v : s.vectors) out << v.render() << ';';
    return out.str();
}

} // namespace detail

inline std::shared_ptr<const ReconstructibleMap> build_affine_map(const AffineOM& a,
                                                                  BuildSession& session);

namespace detail {

// Dimension zero: one vertex, one convex set, empty image.
inline ReconstructibleMap affine_leaf(std::shared_ptr<const TopeGraph> graph) {
    ReconstructibleMap out;
    out.graph = std::move(graph);
    for (const auto& c : out.graph->enumerate_convex_sets()) out.table[c.members] = 0;
    out.trace.push_back("affine leaf");
    return out;
}

// Dimension one: the graph is a path. Convex sets containing the canonically
// smallest vertex map to the empty set, the rest to the single boundary label
// separating them from it.
inline ReconstructibleMap affine_path(std::shared_ptr<const TopeGraph> graph) {
    ReconstructibleMap out;
    out.graph = std::move(graph);
    const SignVector& base = out.graph->vertex(0);
    for (const auto& c : out.graph->enumerate_convex_sets()) {
        if (std::binary_search(c.members.begin(), c.members.end(), 0u)) {
            out.table[c.members] = 0;
            continue;
        }
        ElemMask sep = 0;
        for (ElementId e : mask_elements(c.osc)) {
            Sign side = (c.side_plus & elem_bit(e)) ? Sign::Plus : Sign::Minus;
            if (base.at(e) != side) sep |= elem_bit(e);
        }
        if (std::popcount(sep) != 1)
            throw Error("one-dimensional map needs a unique separating label, got " +
                        render_mask(sep));
        out.table[c.members] = sep;
    }
    out.trace.push_back("affine path order=" + std::to_string(out.graph->order()));
    return out;
}

struct SolutionBundle {
    std::shared_ptr<const ReconstructibleMap> map;
    std::set<SignVector> corner;
    GroundPtr cell_ground;
};

// Dimension two and up. The affine halfspace is perturbed by a copy of its
// own boundary: convex sets meeting the thin slab between the two reduce to
// the map of the induced structure on the boundary, the rest are pushed to a
// corner found at the solution of a sign program over their own halfspace
// description.
inline ReconstructibleMap affine_split(const AffineOM& a, std::shared_ptr<const TopeGraph> graph,
                                       unsigned vc, BuildSession& session) {
    const SignSystem& m = a.base;
    std::vector<std::pair<ElementId, Sign>> chain{{a.g, Sign::Plus}};
    for (ElementId e : m.ground->ids())
        if (e != a.g) chain.emplace_back(e, Sign::Plus);
    ExtensionResult ext = extend_by_localization(m, Localization::lex(std::move(chain)));
    ElementId fhat = ext.element;

    AffineOM aprime = AffineOM::make(ext.system, a.g);
    CocircuitDigraph digraph = cocircuit_digraph(aprime, fhat);

    std::set<uint32_t> slab;
    for (const auto& x : topes(ext.system).vectors)
        if (x.at(fhat) == Sign::Minus && x.at(a.g) == Sign::Plus)
            slab.insert(graph->index_of(x.restricted_to(graph->ground())));

    AffineOM boundary = AffineOM::make(contract(ext.system, elem_bit(fhat)), a.g);
    auto boundary_map = build_affine_map(boundary, session);

    std::map<SignVector, SolutionBundle> per_solution;
    ReconstructibleMap out;
    out.graph = graph;
    unsigned programs = 0;
    for (const auto& c : graph->enumerate_convex_sets()) {
        std::vector<SignVector> in_slab;
        for (uint32_t v : c.members)
            if (slab.count(v)) in_slab.push_back(graph->vertex(v));
        if (!in_slab.empty()) {
            ElemMask img = boundary_map->image_of(in_slab);
            if (std::popcount(img) >= static_cast<int>(vc))
                throw ImageCollision("full-size image " + render_mask(img) +
                                     " appeared along the perturbation slab");
            out.table[c.members] = img;
            continue;
        }

        std::map<ElementId, Sign> constraints;
        for (ElementId e : mask_elements(c.osc))
            constraints[e] = (c.side_plus & elem_bit(e)) ? Sign::Plus : Sign::Minus;
        Polyhedron p = polyhedron(aprime, std::move(constraints));
        SignVector x = solve_program(digraph, p);
        ++programs;

        auto it = per_solution.find(x);
        if (it == per_solution.end()) {
            SolutionCorner sc = corner_at_solution(aprime, digraph, x, fhat);
            AffineOM local = AffineOM::make(flip_element(sc.record.extension, sc.record.element),
                                            sc.record.element);
            auto local_map = build_affine_map(local, session);
            SolutionBundle bundle;
            bundle.map = std::make_shared<const ReconstructibleMap>(
                extend_map(sc.cell.reduced, sc.record, *local_map));
            bundle.corner = {sc.record.corner.begin(), sc.record.corner.end()};
            bundle.cell_ground = sc.cell.reduced.ground;
            it = per_solution.emplace(x, std::move(bundle)).first;
        }
        const SolutionBundle& bundle = it->second;

        // Members whose lift conforms to the solution make up the piece of C
        // inside the solution cell; it must sit inside the corner found there.
        ElemMask rel = x.support_mask() & graph->ground()->mask();
        std::vector<SignVector> in_cell;
        for (uint32_t v : c.members) {
            const SignVector& t = graph->vertex(v);
            if ((t.plus_mask() & rel) == (x.plus_mask() & rel) &&
                (t.minus_mask() & rel) == (x.minus_mask() & rel))
                in_cell.push_back(t);
        }
        if (in_cell.empty())
            throw Error("program solution " + x.render() + " misses the constrained set");
        for (const auto& t : in_cell)
            if (!bundle.corner.count(t.restricted_to(bundle.cell_ground)))
                throw Error("constrained set leaks outside the corner at " + x.render());
        ElemMask img = bundle.map->image_of(in_cell);
        out.table[c.members] = img;
    }
    session.programs += programs;

    // Full-size images must identify their cell: across the whole extension,
    // exactly one cocircuit's tope set shatters each of them. This is what
    // keeps decompression well defined when distinct cells hand out labels.
    std::set<ElemMask> full_images;
    for (const auto& [members, img] : out.table)
        if (std::popcount(img) == static_cast<int>(vc)) full_images.insert(img);
    for (ElemMask v : full_images) {
        unsigned hits = 0;
        for (const auto& x : aprime.affine_cocircuits) {
            std::set<ElemMask> patterns;
            for (const auto& t : aprime.affine)
                if (t.full_support() && x.conforms_to(t)) patterns.insert(t.plus_mask() & v);
            if (patterns.size() == (size_t{1} << std::popcount(v))) ++hits;
        }
        if (hits != 1)
            throw Error("image " + render_mask(v) + " is shattered by " + std::to_string(hits) +
                        " cocircuit cells");
    }

    out.trace.push_back("affine split g=" + std::to_string(a.g) + " vc=" + std::to_string(vc) +
                        " programs=" + std::to_string(programs) +
                        " cells=" + std::to_string(per_solution.size()));
    out.trace.insert(out.trace.end(), boundary_map->trace.begin(), boundary_map->trace.end());
    return out;
}

} // namespace detail

// Reconstructible map for the tope graph of an affine halfspace, built by
// recursion on the VC dimension of the graph. Results are cached in the
// session, so repeated sub-structures are built once.
inline std::shared_ptr<const ReconstructibleMap> build_affine_map(const AffineOM& a,
                                                                  BuildSession& session) {
    std::string key = detail::affine_key(a.base, a.g);
    auto hit = session.cache.find(key);
    if (hit != session.cache.end()) {
        ++session.reused;
        return hit->second;
    }

    if (!check_simple(a.base)) {
        Simplified sp = simplify(a.base);
        std::shared_ptr<const ReconstructibleMap> built;
        if (sp.kept & elem_bit(a.g)) {
            built = build_affine_map(AffineOM::make(sp.system, a.g), session);
        } else {
            for (ElementId f : sp.system.ground->ids()) {
                bool par = true, anti = true;
                for (const auto& x : a.base.vectors) {
                    par = par && x.at(a.g) == x.at(f);
                    anti = anti && x.at(a.g) == opposite(x.at(f));
                }
                if (par) {
                    built = build_affine_map(AffineOM::make(sp.system, f), session);
                    break;
                }
                if (anti) {
                    built = build_affine_map(AffineOM::make(flip_element(sp.system, f), f), session);
                    break;
                }
            }
            if (!built) throw Error("affine element vanished under simplification");
        }
        session.cache.emplace(std::move(key), built);
        return built;
    }

    auto graph = std::make_shared<const TopeGraph>(TopeGraph::build(a.projected_topes()));
    unsigned vc = graph->vc_dimension();
    ReconstructibleMap out;
    if (vc == 0)
        out = detail::affine_leaf(graph);
    else if (vc == 1)
        out = detail::affine_path(graph);
    else
        out = detail::affine_split(a, graph, vc, session);

    auto ptr = std::make_shared<const ReconstructibleMap>(std::move(out));
    session.cache.emplace(std::move(key), ptr);
    return ptr;
}

// Whole pipeline for a system satisfying the full axioms: find a corner, map
// the rest as an affine halfspace, label the corner, verify.
inline ReconstructibleMap build_om_map(const SignSystem& covectors) {
    CornerRecord rec = find_corner(covectors);
    BuildSession session;
    auto inner = build_affine_map(AffineOM::make(rec.extension, rec.element), session);
    ReconstructibleMap map = extend_map(covectors, rec, *inner);
    map.trace.insert(map.trace.begin(),
                     "corner f=" + std::to_string(rec.element) +
                         " removed=" + std::to_string(rec.corner.size()) +
                         " programs=" + std::to_string(session.programs) +
                         " reused=" + std::to_string(session.reused));
    VerifyReport report = verify_reconstructible(map);
    if (!report.ok())
        throw Error("map failed verification: " +
                    (report.problems.empty() ? "unknown" : report.problems.front()));
    return map;
}

// Pipeline for a system satisfying the conditional axioms: peel corners cell
// by cell, then stitch the per-stage corner maps together from the inside
// out. Convex sets meeting the remainder of a stage defer to the deeper map.
inline ReconstructibleMap build_com_map(const SignSystem& covectors) {
    std::vector<PeelStage> stages = com_corner_peeling(covectors);

    std::shared_ptr<const ReconstructibleMap> inner;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        const PeelStage& stage = *it;
        auto graph = std::make_shared<const TopeGraph>(
            TopeGraph::build(SignSystem::make(covectors.ground, stage.topes_before)));
        CornerMap cm = build_corner_map(stage.cell_system, stage.record);
        std::set<SignVector> removed(stage.removed.begin(), stage.removed.end());

        ReconstructibleMap stage_map;
        stage_map.graph = graph;
        for (const auto& c : graph->enumerate_convex_sets()) {
            std::vector<SignVector> live;
            for (uint32_t v : c.members)
                if (!removed.count(graph->vertex(v))) live.push_back(graph->vertex(v));
            ElemMask img;
            if (!live.empty()) {
                if (!inner) throw Error("innermost cell left vertices unlabeled");
                img = inner->image_of(live);
            } else {
                std::vector<uint32_t> key;
                key.reserve(c.members.size());
                for (uint32_t v : c.members)
                    key.push_back(cm.graph->index_of(graph->vertex(v).restricted_to(cm.graph->ground())));
                std::sort(key.begin(), key.end());
                auto entry = cm.table.find(key);
                if (entry == cm.table.end())
                    throw UnknownKey("peeled set is not convex inside its cell");
                img = entry->second;
                if (inner && inner->graph->is_shattered(img))
                    throw Error("corner image " + render_mask(img) +
                                " is still shattered by the remainder");
            }
            stage_map.table[c.members] = img;
        }
        stage_map.trace.push_back("peel cell=" + stage.witness.render() +
                                  " removed=" + std::to_string(stage.removed.size()));
        if (inner)
            stage_map.trace.insert(stage_map.trace.end(), inner->trace.begin(), inner->trace.end());
        inner = std::make_shared<const ReconstructibleMap>(std::move(stage_map));
    }
    if (!inner) throw EmptySystem("nothing to peel");

    ReconstructibleMap map = *inner;
    VerifyReport report = verify_reconstructible(map);
    if (!report.ok())
        throw Error("map failed verification: " +
                    (report.problems.empty() ? "unknown" : report.problems.front()));
    return map;
}

} // namespace om
