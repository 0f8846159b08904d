#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sign.hpp"

namespace om {

// A finite set of sign vectors over one ground set, kept sorted in canonical
// order with duplicates removed.
struct SignSystem {
    GroundPtr ground;
    std::vector<SignVector> vectors;

    static SignSystem make(GroundPtr ground, std::vector<SignVector> vectors) {
        SignSystem s;
        s.ground = std::move(ground);
        for (const auto& v : vectors) require_same_ground(s.ground, v.ground());
        std::sort(vectors.begin(), vectors.end());
        vectors.erase(std::unique(vectors.begin(), vectors.end()), vectors.end());
        s.vectors = std::move(vectors);
        return s;
    }

    size_t size() const { return vectors.size(); }
    bool empty() const { return vectors.empty(); }

    bool contains(const SignVector& v) const {
        auto it = std::lower_bound(vectors.begin(), vectors.end(), v);
        return it != vectors.end() && *it == v;
    }
};

struct ParseResult {
    SignSystem system;
    std::vector<std::string> warnings;
};

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    std::string s = pos == std::string::npos ? line : line.substr(0, pos);
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> parts;
    std::string w;
    while (in >> w) parts.push_back(w);
    return parts;
}

// Text format: optional "elements: a b c" header naming the columns, then one
// sign token per line over {+,-,0}. '#' starts a comment, blank lines are
// skipped, duplicate tokens are reported as warnings and dropped.
inline ParseResult parse_system(std::istream& in) {
    ParseResult res;
    std::vector<std::string> names;
    std::vector<std::string> tokens;
    std::string raw;
    size_t lineno = 0;
    bool body_started = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        if (line.empty()) continue;
        if (line.rfind("elements:", 0) == 0) {
            if (body_started || !names.empty())
                throw ParseError("line " + std::to_string(lineno) + ": elements header must come first");
            names = split_ws(line.substr(9));
            if (names.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty elements header");
            continue;
        }
        body_started = true;
        for (char c : line)
            if (c != '+' && c != '-' && c != '0')
                throw ParseError("line " + std::to_string(lineno) + ": bad sign character '" + std::string(1, c) + "'");
        if (!tokens.empty() && line.size() != tokens.front().size())
            throw ParseError("line " + std::to_string(lineno) + ": token length " + std::to_string(line.size()) +
                             " does not match " + std::to_string(tokens.front().size()));
        tokens.push_back(line);
    }
    if (tokens.empty()) throw ParseError("no sign vectors in input");
    size_t width = tokens.front().size();
    if (!names.empty() && names.size() != width)
        throw ParseError("elements header names " + std::to_string(names.size()) +
                         " columns, tokens have " + std::to_string(width));
    GroundPtr ground;
    {
        std::vector<ElementId> ids(width);
        for (size_t i = 0; i < width; ++i) ids[i] = static_cast<ElementId>(i);
        ground = GroundSet::make(std::move(ids), std::move(names));
    }
    std::vector<SignVector> vecs;
    for (const auto& t : tokens) vecs.push_back(SignVector::from_token(ground, t));
    res.system = SignSystem::make(ground, std::move(vecs));
    if (res.system.size() != tokens.size())
        res.warnings.push_back("dropped " + std::to_string(tokens.size() - res.system.size()) +
                               " duplicate vector(s)");
    return res;
}

inline ParseResult parse_system(const std::string& text) {
    std::istringstream in(text);
    return parse_system(in);
}

inline bool has_default_names(const GroundSet& g) {
    for (ElementId e : g.ids())
        if (g.name_of(e) != std::to_string(e)) return false;
    return true;
}

inline std::string serialize_system(const SignSystem& s) {
    std::ostringstream out;
    if (!has_default_names(*s.ground)) {
        out << "elements:";
        for (ElementId e : s.ground->ids()) out << ' ' << s.ground->name_of(e);
        out << '\n';
    }
    for (const auto& v : s.vectors) out << v.render() << '\n';
    return out.str();
}

// Reorientation: negate one coordinate throughout.
inline SignSystem flip_element(const SignSystem& s, ElementId e) {
    if (!s.ground->has(e)) throw ElementNotFound("id " + std::to_string(e));
    ElemMask bit = elem_bit(e);
    std::vector<SignVector> out;
    out.reserve(s.size());
    for (const auto& v : s.vectors) {
        ElemMask p = v.plus_mask(), m = v.minus_mask();
        ElemMask np = (p & ~bit) | (m & bit);
        ElemMask nm = (m & ~bit) | (p & bit);
        out.emplace_back(s.ground, np, nm);
    }
    return SignSystem::make(s.ground, std::move(out));
}

} // namespace om
