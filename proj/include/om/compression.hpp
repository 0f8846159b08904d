#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "om/errors.hpp"
#include "om/reconstructor.hpp"
#include "om/system.hpp"
#include "om/tope_graph.hpp"

namespace om {

// A sample is a sign vector with zeros allowed; it is realizable when some
// tope extends it. The realizable samples of a tope class are exactly the
// zeroed-down copies of its topes, collected here without duplicates.
inline std::vector<SignVector> realizable_samples(const SignSystem& topes_in) {
    if (topes_in.vectors.empty()) throw EmptySystem("no topes to sample from");
    std::set<std::pair<ElemMask, ElemMask>> seen;
    std::vector<SignVector> out;
    const ElemMask full = topes_in.ground->mask();
    for (const auto& t : topes_in.vectors) {
        ElemMask keep = full;
        while (true) {
            ElemMask p = t.plus_mask() & keep, m = t.minus_mask() & keep;
            if (seen.insert({p, m}).second) out.emplace_back(topes_in.ground, p, m);
            if (keep == 0) break;
            keep = (keep - 1) & full;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// An unlabeled compression scheme: alpha sends every realizable sample to a
// small subset of its support, beta sends each subset that alpha uses back
// to a tope extending all samples compressed onto it. Tables are keyed by
// the rendered sample token (token order equals canonical vector order) and
// by element mask.
struct CompressionScheme {
    GroundPtr universe;
    std::map<std::string, ElemMask> alpha;
    std::map<ElemMask, SignVector> beta;
    unsigned declared_size = 0;
};

inline ElemMask alpha(const CompressionScheme& s, const SignVector& sample) {
    auto it = s.alpha.find(sample.render());
    if (it == s.alpha.end())
        throw UnrealizableSample("sample " + sample.render() + " is not in the scheme's domain");
    return it->second;
}

inline const SignVector& beta(const CompressionScheme& s, ElemMask v) {
    auto it = s.beta.find(v);
    if (it == s.beta.end())
        throw UnknownImage("no decompression entry for " + render_mask(v));
    return it->second;
}

// Materializes the scheme a reconstructible map induces: compress a sample
// to the image of the convex set of topes extending it, decompress an image
// to the canonical witness vertex shared by its whole fiber.
inline CompressionScheme build_scheme(const ReconstructibleMap& map) {
    ReconstructibleMap m = map;
    VerifyReport rep = verify_reconstructible(m);
    if (!rep.ok()) throw Error("map failed verification: " + rep.problems.front());
    const TopeGraph& g = *m.graph;

    CompressionScheme s;
    s.universe = g.ground();
    s.declared_size = g.vc_dimension();
    for (const SignVector& sample : realizable_samples(g.topes())) {
        ConvexSet c = g.convex_from_sample(sample);
        ElemMask img = m.image_of_members(c.members);
        s.alpha[sample.render()] = img;
        auto w = m.witnesses.find(img);
        if (w == m.witnesses.end())
            throw UnknownImage("verified map lacks a witness for " + render_mask(img));
        s.beta.insert({img, w->second});
    }
    return s;
}

struct SchemeReport {
    size_t samples = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

namespace detail {

inline void scheme_problem(SchemeReport& r, std::string what) {
    if (r.failures.size() < 24) r.failures.push_back(std::move(what));
    else if (r.failures.size() == 24) r.failures.push_back("... further failures suppressed");
}

} // namespace detail

// Checks the full scheme contract against a tope class: alpha is defined on
// exactly the realizable samples, images are small subsets of the sample's
// support, beta inverts alpha to a tope extending the sample, and every
// decompression lands inside the class.
inline SchemeReport verify_scheme(const SignSystem& topes_in, const CompressionScheme& s,
                                  unsigned k) {
    SchemeReport r;
    if (s.universe->ids() != topes_in.ground->ids()) {
        detail::scheme_problem(r, "scheme universe does not match the tope class ground set");
        return r;
    }
    std::set<std::string> tope_tokens;
    for (const auto& t : topes_in.vectors) tope_tokens.insert(t.render());

    auto samples = realizable_samples(topes_in);
    r.samples = samples.size();
    std::set<std::string> realizable;
    for (const auto& sample : samples) {
        std::string tok = sample.render();
        realizable.insert(tok);
        auto it = s.alpha.find(tok);
        if (it == s.alpha.end()) {
            detail::scheme_problem(r, "alpha undefined on realizable sample " + tok);
            continue;
        }
        ElemMask img = it->second;
        if (std::popcount(img) > static_cast<int>(k))
            detail::scheme_problem(r, "alpha image " + render_mask(img) + " of " + tok +
                                          " exceeds the size bound " + std::to_string(k));
        if (img & ~sample.support_mask())
            detail::scheme_problem(r, "alpha image " + render_mask(img) +
                                          " leaves the support of " + tok);
        auto b = s.beta.find(img);
        if (b == s.beta.end()) {
            detail::scheme_problem(r, "beta undefined on alpha image " + render_mask(img));
            continue;
        }
        if (!sample.conforms_to(b->second))
            detail::scheme_problem(r, "decompression of " + tok + " via " + render_mask(img) +
                                          " gives " + b->second.render() +
                                          ", which does not extend it");
    }
    for (const auto& [tok, img] : s.alpha)
        if (!realizable.count(tok))
            detail::scheme_problem(r, "alpha defined on unrealizable sample " + tok);
    for (const auto& [img, t] : s.beta)
        if (!tope_tokens.count(t.render()))
            detail::scheme_problem(r, "beta value " + t.render() + " for " + render_mask(img) +
                                          " is not a tope of the class");
    return r;
}

namespace detail {

inline std::vector<unsigned> display_ids(const GroundPtr& ground, ElemMask v) {
    std::vector<unsigned> out;
    for (ElementId e : ground->ids())
        if (v & elem_bit(e)) out.push_back(e + 1);
    return out;
}

inline std::string beta_key(const GroundPtr& ground, ElemMask v) {
    std::string out;
    for (unsigned id : display_ids(ground, v)) {
        if (!out.empty()) out.push_back(',');
        out += std::to_string(id);
    }
    return out;
}

} // namespace detail

// Scheme documents: JSON with keys universe, size, alpha, beta. Element ids
// are displayed 1-based; samples and topes use the usual sign tokens. Beta
// entries are emitted smallest image first.
inline std::string export_scheme(const CompressionScheme& s) {
    nlohmann::ordered_json doc;
    doc["universe"] = detail::display_ids(s.universe, s.universe->mask());
    doc["size"] = s.declared_size;
    auto alpha_doc = nlohmann::ordered_json::object();
    for (const auto& [tok, img] : s.alpha) alpha_doc[tok] = detail::display_ids(s.universe, img);
    doc["alpha"] = std::move(alpha_doc);
    std::vector<ElemMask> keys;
    keys.reserve(s.beta.size());
    for (const auto& [img, t] : s.beta) keys.push_back(img);
    std::sort(keys.begin(), keys.end(), [](ElemMask a, ElemMask b) {
        if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
        return canonical_mask_less(a, b);
    });
    auto beta_doc = nlohmann::ordered_json::object();
    for (ElemMask img : keys)
        beta_doc[detail::beta_key(s.universe, img)] = s.beta.at(img).render();
    doc["beta"] = std::move(beta_doc);
    return doc.dump(2) + "\n";
}

inline CompressionScheme import_scheme(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("scheme document: ") + ex.what());
    }
    if (!doc.is_object() || !doc.contains("universe") || !doc.contains("size") ||
        !doc.contains("alpha") || !doc.contains("beta"))
        throw ParseError("scheme document needs universe, size, alpha and beta");

    CompressionScheme s;
    try {
        std::vector<ElementId> ids;
        for (unsigned v : doc["universe"].get<std::vector<unsigned>>()) {
            if (v == 0) throw ParseError("element ids are displayed 1-based");
            ids.push_back(v - 1);
        }
        s.universe = GroundSet::make(std::move(ids));
        s.declared_size = doc["size"].get<unsigned>();

        auto mask_of = [&](const std::vector<unsigned>& raw, const std::string& where) {
            ElemMask v = 0;
            for (unsigned id : raw) {
                if (id == 0 || !s.universe->has(id - 1))
                    throw ParseError("element " + std::to_string(id) + " in " + where +
                                     " is outside the universe");
                v |= elem_bit(id - 1);
            }
            return v;
        };

        for (const auto& [tok, val] : doc["alpha"].items()) {
            SignVector sample = SignVector::from_token(s.universe, tok);
            s.alpha[sample.render()] = mask_of(val.get<std::vector<unsigned>>(), "alpha[" + tok + "]");
        }
        for (const auto& [key, val] : doc["beta"].items()) {
            std::vector<unsigned> raw;
            size_t pos = 0;
            while (pos < key.size()) {
                size_t comma = key.find(',', pos);
                if (comma == std::string::npos) comma = key.size();
                raw.push_back(std::stoul(key.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            SignVector t = SignVector::from_token(s.universe, val.get<std::string>());
            if (!t.full_support())
                throw ParseError("beta value " + t.render() + " is not a full tope");
            s.beta.insert({mask_of(raw, "beta[" + key + "]"), t});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("scheme document: ") + ex.what());
    } catch (const std::invalid_argument&) {
        throw ParseError("beta keys are comma-joined 1-based element ids");
    }

    for (const auto& [tok, img] : s.alpha)
        if (!s.beta.count(img))
            throw ParseError("no beta entry for the alpha image " +
                             detail::beta_key(s.universe, img) + " of " + tok);
    return s;
}

} // namespace om
