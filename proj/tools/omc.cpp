// omc: command line front end for the sign-vector toolkit. Reads covector or
// tope systems from .sv files (anything else is treated as a rational vector
// configuration), prints structured reports, solves programs, cuts corners,
// peels, and builds or checks compression schemes.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "om/arrangements.hpp"
#include "om/axioms.hpp"
#include "om/compression.hpp"
#include "om/errors.hpp"
#include "om/extensions.hpp"
#include "om/program.hpp"
#include "om/reconstructor.hpp"
#include "om/system.hpp"
#include "om/tope_graph.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNegative = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw om::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

om::SignSystem load_system(const std::string& path) {
    std::string text = slurp(path);
    if (ends_with(path, ".sv")) {
        auto res = om::parse_system(text);
        for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
        return res.system;
    }
    return om::om_from_vectors(om::parse_matrix(text)).system;
}

void guard_universe(const om::SignSystem& s, unsigned max_universe) {
    if (s.ground->size() > max_universe)
        throw om::Error("ground set of " + std::to_string(s.ground->size()) +
                        " elements exceeds --max-universe " + std::to_string(max_universe));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw om::Error("cannot write " + out_path);
    out << text;
}

std::map<om::ElementId, om::Sign> parse_constraints(const std::string& raw,
                                                    const om::GroundPtr& ground) {
    std::map<om::ElementId, om::Sign> out;
    if (raw.empty()) return out;
    std::istringstream in(raw);
    std::string part;
    while (std::getline(in, part, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos || eq + 2 != part.size() ||
            (part[eq + 1] != '+' && part[eq + 1] != '-'))
            throw om::ParseError("constraint '" + part + "' is not of the form e=+ or e=-");
        om::ElementId e;
        try {
            e = static_cast<om::ElementId>(std::stoul(part.substr(0, eq)));
        } catch (...) {
            throw om::ParseError("constraint element '" + part.substr(0, eq) + "' is not an id");
        }
        if (!ground->has(e)) throw om::ElementNotFound("constraint element " + std::to_string(e));
        out[e] = part[eq + 1] == '+' ? om::Sign::Plus : om::Sign::Minus;
    }
    return out;
}

std::string classify_report(const om::SignSystem& s) {
    om::OrientedStructure o = om::analyze(s);
    std::ostringstream out;
    out << "verdict=" << om::verdict_name(o.classification.verdict) << "\n"
        << "composition=" << (o.classification.composition ? "yes" : "no") << "\n"
        << "strong_elimination=" << (o.classification.strong_elimination ? "yes" : "no") << "\n"
        << "symmetric=" << (o.classification.symmetric ? "yes" : "no") << "\n"
        << "face_symmetric=" << (o.classification.face_symmetric ? "yes" : "no") << "\n"
        << "simple=" << (o.classification.simple ? "yes" : "no") << "\n"
        << "elements=" << s.ground->size() << "\n"
        << "covectors=" << s.size() << "\n"
        << "topes=" << o.topes.size() << "\n"
        << "cocircuits=" << o.cocircuits.size() << "\n";
    if (o.rank) out << "rank=" << *o.rank << "\n";
    else out << "rank=none\n";
    return out.str();
}

om::SignSystem recovered_covectors(const om::SignSystem& input) {
    om::SignSystem t = om::topes(input);
    if (t.empty()) throw om::Error("input contains no full-support vectors");
    return om::covectors_from_topes(t).system;
}

int run_scheme_verify(const std::string& class_path, const std::string& scheme_path,
                      std::optional<unsigned> size) {
    om::SignSystem cls = load_system(class_path);
    om::SignSystem t = om::topes(cls);
    om::CompressionScheme scheme = om::import_scheme(slurp(scheme_path));
    unsigned k = size ? *size : scheme.declared_size;
    om::SchemeReport rep = om::verify_scheme(t, scheme, k);
    if (rep.ok()) {
        std::cout << "PASS samples=" << rep.samples << " size=" << k << "\n";
        return 0;
    }
    std::cout << "FAIL samples=" << rep.samples << " size=" << k << "\n";
    for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
    return kExitNegative;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sign-vector systems: classification, programs, corners, compression schemes"};
    app.require_subcommand(1);
    unsigned max_universe = 12;
    app.add_option("--max-universe", max_universe,
                   "largest ground set accepted for enumeration-heavy commands");

    std::string in_path, out_path, class_path, scheme_path, constraints, trace_path, key;
    std::optional<unsigned> size_flag;
    long g_flag = -1, f_flag = -1;
    bool topes_only = false;

    auto* c_classify = app.add_subcommand("classify", "report the axioms a system satisfies");
    c_classify->add_option("input", in_path, "input .sv or matrix file")->required();

    auto* c_topes = app.add_subcommand("topes", "print the full-support vectors");
    c_topes->add_option("input", in_path)->required();

    auto* c_cocircuits = app.add_subcommand("cocircuits", "print the minimal nonzero covectors");
    c_cocircuits->add_option("input", in_path)->required();

    auto* c_rank = app.add_subcommand("rank", "print the rank of a graded system");
    c_rank->add_option("input", in_path)->required();

    auto* c_vc = app.add_subcommand("vc", "print the VC dimension of the tope graph");
    c_vc->add_option("input", in_path)->required();

    auto* c_prog = app.add_subcommand("program-solve", "solve an affine program");
    c_prog->add_option("input", in_path)->required();
    c_prog->add_option("--g", g_flag, "element whose halfspace is the affine part")->required();
    c_prog->add_option("--f", f_flag, "objective element")->required();
    c_prog->add_option("--constraints", constraints, "sign constraints, e.g. 0=+,2=-");

    auto* c_corner = app.add_subcommand("corner", "cut a corner from an oriented matroid");
    c_corner->add_option("input", in_path)->required();

    auto* c_peel = app.add_subcommand("peel", "peel a complex corner by corner");
    c_peel->add_option("input", in_path)->required();

    auto* c_build = app.add_subcommand("scheme-build", "build a compression scheme for a class");
    c_build->add_option("--class", class_path, "tope class or covector file")->required();
    c_build->add_option("--out", out_path, "scheme document destination (default stdout)");
    c_build->add_option("--trace", trace_path, "write the build trace to a file");

    auto* c_verify = app.add_subcommand("scheme-verify", "check a scheme document against a class");
    c_verify->add_option("--class", class_path)->required();
    c_verify->add_option("--scheme", scheme_path)->required();
    c_verify->add_option("--size", size_flag, "size bound (default: the document's own)");

    auto* c_gen = app.add_subcommand("gen", "write a named instance");
    c_gen->add_option("key", key, "instance key, e.g. paper4, cycle(5), cube(3), tri, unif(3,4)")
        ->required();
    c_gen->add_option("--out", out_path, "destination (default stdout)");
    c_gen->add_flag("--topes", topes_only, "write the tope class instead of all covectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (c_classify->parsed()) {
            std::cout << classify_report(load_system(in_path));
        } else if (c_topes->parsed()) {
            std::cout << om::serialize_system(om::topes(load_system(in_path)));
        } else if (c_cocircuits->parsed()) {
            std::cout << om::serialize_system(om::cocircuits(load_system(in_path)));
        } else if (c_rank->parsed()) {
            std::cout << om::rank_of(load_system(in_path)) << "\n";
        } else if (c_vc->parsed()) {
            om::SignSystem s = load_system(in_path);
            guard_universe(s, max_universe);
            std::cout << om::TopeGraph::build(om::topes(s)).vc_dimension() << "\n";
        } else if (c_prog->parsed()) {
            om::SignSystem s = load_system(in_path);
            guard_universe(s, max_universe);
            om::AffineOM a = om::AffineOM::make(s, static_cast<om::ElementId>(g_flag));
            om::Polyhedron p = om::polyhedron(a, parse_constraints(constraints, s.ground));
            try {
                om::SignVector x = om::solve_program(a, static_cast<om::ElementId>(f_flag), p);
                std::cout << "optimum=" << x.render() << "\n";
            } catch (const om::Unbounded& ex) {
                std::cout << "UNBOUNDED " << ex.what() << "\n";
                return kExitNegative;
            } catch (const om::EmptyPolyhedron& ex) {
                std::cout << "EMPTY_POLYHEDRON " << ex.what() << "\n";
                return kExitNegative;
            }
        } else if (c_corner->parsed()) {
            om::SignSystem s = load_system(in_path);
            guard_universe(s, max_universe);
            om::CornerRecord rec = om::find_corner(s);
            std::cout << "f=" << rec.element << "\nside=" << om::sign_char(rec.side)
                      << "\nremoved=" << rec.corner.size() << "\n";
            for (const auto& t : rec.corner) std::cout << t.render() << "\n";
        } else if (c_peel->parsed()) {
            om::SignSystem s = load_system(in_path);
            guard_universe(s, max_universe);
            try {
                auto stages = om::com_corner_peeling(s);
                unsigned i = 0;
                for (const auto& st : stages) {
                    std::cout << "stage=" << ++i << " cell=" << st.witness.render() << " removed=";
                    for (size_t j = 0; j < st.removed.size(); ++j)
                        std::cout << (j ? "," : "") << st.removed[j].render();
                    std::cout << "\n";
                }
            } catch (const om::NoPeelingFound& ex) {
                std::cout << "NO_PEELING " << ex.what() << "\n";
                return kExitNegative;
            }
        } else if (c_build->parsed()) {
            om::SignSystem input = load_system(class_path);
            guard_universe(input, max_universe);
            om::SignSystem covectors = recovered_covectors(input);
            om::Verdict v = om::classify_system(covectors).verdict;
            om::ReconstructibleMap map;
            if (v == om::Verdict::OM) map = om::build_om_map(covectors);
            else if (v == om::Verdict::COM_NOT_OM) map = om::build_com_map(covectors);
            else throw om::Error("input class is neither an oriented matroid nor a complex");
            om::CompressionScheme scheme = om::build_scheme(map);
            emit(om::export_scheme(scheme), out_path);
            if (!trace_path.empty()) {
                std::ostringstream tr;
                for (const auto& line : map.trace) tr << line << "\n";
                emit(tr.str(), trace_path);
            }
        } else if (c_verify->parsed()) {
            return run_scheme_verify(class_path, scheme_path, size_flag);
        } else if (c_gen->parsed()) {
            om::NamedInstance inst = om::named_instance(key);
            om::SignSystem out_sys = inst.structure.system;
            if (topes_only) {
                if (inst.g) out_sys = om::AffineOM::make(out_sys, *inst.g).projected_topes();
                else out_sys = om::topes(out_sys);
            }
            emit(om::serialize_system(out_sys), out_path);
        }
    } catch (const om::ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return kExitParse;
    } catch (const om::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
