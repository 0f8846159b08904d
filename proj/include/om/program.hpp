#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "om/extensions.hpp"

namespace om {

// An oriented matroid with a distinguished positive halfspace. Covectors with
// X_g = + form the affine part, those with X_g = 0 the part at infinity.
struct AffineOM {
    SignSystem base;
    ElementId g = 0;
    std::vector<SignVector> affine;
    std::vector<SignVector> infinity;
    std::vector<SignVector> affine_cocircuits;
    std::vector<SignVector> infinity_cocircuits;

    static AffineOM make(SignSystem covectors, ElementId g) {
        if (!covectors.ground->has(g)) throw ElementNotFound("element " + std::to_string(g));
        Classification cls = classify_system(covectors);
        if (cls.verdict != Verdict::OM)
            throw Error("an affine structure needs an oriented matroid base");
        AffineOM a;
        a.g = g;
        for (const auto& x : covectors.vectors) {
            if (x.at(g) == Sign::Plus) a.affine.push_back(x);
            else if (x.at(g) == Sign::Zero) a.infinity.push_back(x);
        }
        for (const auto& x : cocircuits(covectors).vectors) {
            if (x.at(g) == Sign::Plus) a.affine_cocircuits.push_back(x);
            else if (x.at(g) == Sign::Zero) a.infinity_cocircuits.push_back(x);
        }
        a.base = std::move(covectors);
        return a;
    }

    // Affine topes with g removed, the vertex set of the affine tope graph.
    SignSystem projected_topes() const {
        GroundPtr sub = base.ground->without(elem_bit(g));
        std::vector<SignVector> out;
        for (const auto& x : affine)
            if (x.full_support()) out.push_back(x.restricted_to(sub));
        return SignSystem::make(sub, std::move(out));
    }
};

// Two cocircuits are adjacent when their composition covers both, i.e. they
// are the endpoints of a single edge cell. Orientation comes from the unique
// cocircuit at infinity that closes the strong-elimination pattern: it is the
// direction of travel, and its sign on the objective points the arrow.
struct DigraphArc {
    uint32_t a = 0, b = 0;
    SignVector cover;
    SignVector z;
    int dir = 0; // +1: a -> b, -1: b -> a, 0: unoriented
};

struct HalfArc {
    uint32_t node = 0;
    SignVector partner; // cocircuit at infinity
    SignVector cover;   // the unbounded edge cell
    int dir = 0;        // +1: outgoing, -1: incoming, 0: unoriented
};

struct CocircuitDigraph {
    ElementId f = 0;
    std::vector<SignVector> nodes;
    std::vector<DigraphArc> arcs;
    std::vector<HalfArc> half_arcs;
};

inline CocircuitDigraph cocircuit_digraph(const AffineOM& a, ElementId f) {
    if (!a.base.ground->has(f)) throw ElementNotFound("element " + std::to_string(f));
    if (f == a.g) throw Error("objective must differ from the halfspace element");

    CocircuitDigraph d;
    d.f = f;
    d.nodes = a.affine_cocircuits;

    auto covers_both = [&](const SignVector& x1, const SignVector& x2, SignVector& y) {
        if (x1.separator_mask(x2)) return false;
        y = x1.composed(x2);
        return covers(a.base, x1, y) && covers(a.base, x2, y);
    };

    auto orient_z = [&](const SignVector& x1, const SignVector& x2) {
        SignVector target = x1.negated().composed(x2);
        ElemMask sep = x1.negated().separator_mask(x2);
        const SignVector* found = nullptr;
        for (const auto& z : a.infinity_cocircuits) {
            if ((z.plus_mask() & ~sep) != (target.plus_mask() & ~sep)) continue;
            if ((z.minus_mask() & ~sep) != (target.minus_mask() & ~sep)) continue;
            if (found) throw OrientationAmbiguous("two directions fit the edge " + x1.render() +
                                                  " -- " + x2.render());
            found = &z;
        }
        if (!found) throw OrientationAmbiguous("no direction fits the edge " + x1.render() +
                                               " -- " + x2.render());
        return *found;
    };

    for (uint32_t i = 0; i < d.nodes.size(); ++i) {
        for (uint32_t j = i + 1; j < d.nodes.size(); ++j) {
            SignVector y;
            if (!covers_both(d.nodes[i], d.nodes[j], y)) continue;
            DigraphArc arc;
            arc.a = i;
            arc.b = j;
            arc.cover = y;
            arc.z = orient_z(d.nodes[i], d.nodes[j]);
            Sign zf = arc.z.at(f);
            arc.dir = zf == Sign::Plus ? 1 : zf == Sign::Minus ? -1 : 0;
            d.arcs.push_back(std::move(arc));
        }
        for (const auto& x2 : a.infinity_cocircuits) {
            SignVector y;
            if (!covers_both(d.nodes[i], x2, y)) continue;
            HalfArc h;
            h.node = i;
            h.partner = x2;
            h.cover = y;
            Sign zf = x2.at(f);
            h.dir = zf == Sign::Plus ? 1 : zf == Sign::Minus ? -1 : 0;
            d.half_arcs.push_back(std::move(h));
        }
    }
    return d;
}

struct Polyhedron {
    std::map<ElementId, Sign> constraints;
    std::vector<SignVector> members;

    bool admits(const SignVector& x) const {
        for (auto& [e, s] : constraints) {
            Sign v = x.at(e);
            if (v != s && v != Sign::Zero) return false;
        }
        return true;
    }
};

inline Polyhedron polyhedron(const AffineOM& a, std::map<ElementId, Sign> constraints) {
    for (auto& [e, s] : constraints) {
        if (!a.base.ground->has(e)) throw ElementNotFound("element " + std::to_string(e));
        if (e == a.g) throw Error("the halfspace element cannot be constrained");
        if (s == Sign::Zero) throw Error("constraints must be + or -");
    }
    Polyhedron p;
    p.constraints = std::move(constraints);
    for (const auto& x : a.affine)
        if (p.admits(x)) p.members.push_back(x);
    return p;
}

// The optimum of a program is a feasible cocircuit with no arrows pointing at
// it. Feasible incoming half-arcs whose whole edge cell stays feasible are
// unbounded recession directions.
inline SignVector solve_program(const CocircuitDigraph& d, const Polyhedron& p) {
    if (p.members.empty()) throw EmptyPolyhedron("no feasible covectors");

    std::vector<bool> feasible(d.nodes.size(), false);
    bool any_node = false;
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        feasible[i] = p.admits(d.nodes[i]);
        any_node = any_node || feasible[i];
    }
    if (!any_node) throw NoOptimum("feasible region contains no cocircuit");

    for (const auto& h : d.half_arcs)
        if (feasible[h.node] && h.dir == -1 && p.admits(h.cover))
            throw Unbounded("recession direction " + h.partner.render() + " at " +
                            d.nodes[h.node].render());

    std::vector<int> indeg(d.nodes.size(), 0);
    for (const auto& arc : d.arcs) {
        if (!feasible[arc.a] || !feasible[arc.b] || arc.dir == 0) continue;
        ++indeg[arc.dir > 0 ? arc.b : arc.a];
    }
    for (size_t i = 0; i < d.nodes.size(); ++i)
        if (feasible[i] && indeg[i] == 0) return d.nodes[i];
    throw NoOptimum("every feasible cocircuit has an incoming arrow");
}

inline SignVector solve_program(const AffineOM& a, ElementId f, const Polyhedron& p) {
    return solve_program(cocircuit_digraph(a, f), p);
}

// The local corner at an optimum. Edge cells through the solution become the
// cocircuits of its residual structure; arrows pointing at the solution put
// the new element on the minus side, everything else on plus. Cutting away
// the minus side leaves the corner that contains the feasible topes at X.
struct SolutionCorner {
    Upset cell;
    CornerRecord record;
};

inline SolutionCorner corner_at_solution(const AffineOM& a, const CocircuitDigraph& d,
                                         const SignVector& x, ElementId f) {
    uint32_t xi = static_cast<uint32_t>(d.nodes.size());
    for (uint32_t i = 0; i < d.nodes.size(); ++i)
        if (d.nodes[i] == x) { xi = i; break; }
    if (xi == d.nodes.size()) throw VectorNotInSystem(x.render());
    if (x.at(f) == Sign::Zero)
        throw NotGeneralPosition("objective vanishes on the solution " + x.render());

    Upset up = upset(a.base, x);
    SignSystem local_coc = cocircuits(up.reduced);

    std::map<SignVector, Sign> table;
    for (const auto& c : local_coc.vectors) {
        SignVector cover(a.base.ground, x.plus_mask() | c.plus_mask(), x.minus_mask() | c.minus_mask());
        Sign assigned = Sign::Zero;
        bool matched = false;
        for (const auto& arc : d.arcs) {
            if (arc.a != xi && arc.b != xi) continue;
            if (!(arc.cover == cover)) continue;
            if (arc.dir == 0)
                throw NotGeneralPosition("unoriented edge at the solution toward " + c.render());
            bool incoming = (arc.dir > 0) ? (arc.b == xi) : (arc.a == xi);
            assigned = incoming ? Sign::Minus : Sign::Plus;
            matched = true;
            break;
        }
        if (!matched)
            for (const auto& h : d.half_arcs) {
                if (h.node != xi || !(h.cover == cover)) continue;
                if (h.dir == 0)
                    throw NotGeneralPosition("unoriented ray at the solution toward " + c.render());
                assigned = h.dir < 0 ? Sign::Minus : Sign::Plus;
                matched = true;
                break;
            }
        if (!matched)
            throw NotGeneralPosition("edge cell " + cover.render() + " missing from the digraph");
        table[c] = assigned;
    }

    ExtensionResult ext = extend_by_localization(up.reduced, Localization::explicit_table(table));
    if (!is_general_position(ext.system, ext.element))
        throw NotGeneralPosition("local extension at " + x.render() + " hits a vertex");

    SolutionCorner out;
    out.record = corner_from_extension(up.reduced, ext.system, ext.element, Sign::Minus);
    out.cell = std::move(up);
    return out;
}

inline SolutionCorner corner_at_solution(const AffineOM& a, const SignVector& x, ElementId f) {
    return corner_at_solution(a, cocircuit_digraph(a, f), x, f);
}

} // namespace om
