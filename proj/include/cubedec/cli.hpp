#pragma once

#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cubedec/cochain.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/hodge.hpp"
#include "cubedec/io.hpp"
#include "cubedec/operators.hpp"
#include "cubedec/random.hpp"
#include "cubedec/torus.hpp"
#include "cubedec/torus_calculus.hpp"
#include "cubedec/version.hpp"

namespace cubedec {

/// One resolved invocation. `field` and `faces`/`cells` accept either a file
/// path or a generator name ("random<k>form", "random", "random:<count>");
/// generated inputs are fully determined by the seed.
struct RunConfig {
    std::string command;
    int n = 0;
    int N = 0;
    std::string op;
    std::string field;
    std::string chain;
    std::string complex_path;
    std::string output_dir = ".";
    std::string mode = "exact";  // exact | float
    double tolerance = 1e-10;    // reporting threshold for float-mode residuals
    std::uint64_t seed = 0;
    int degree = 1;  // form degree for decompose
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return in;
}

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
    return cfg.output_dir + "/" + name;
}

inline std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::ofstream out(out_path(cfg, name));
    if (!out) throw Error("cannot write '" + out_path(cfg, name) + "'");
    return out;
}

/// "random<k>form" names the seeded generator of a random k-field.
inline std::optional<int> generator_degree(const std::string& name) {
    if (name.size() == 11 && name.compare(0, 6, "random") == 0 &&
        name.compare(7, 4, "form") == 0 && std::isdigit(static_cast<unsigned char>(name[6])))
        return name[6] - '0';
    return std::nullopt;
}

inline IntCochain make_field(const TorusMesh& mesh, int dim, SeededRng& rng, std::int64_t) {
    return random_int_cochain(rng, dim, mesh.complex().cell_count(dim));
}

inline Cochain make_field(const TorusMesh& mesh, int dim, SeededRng& rng, double) {
    return random_real_cochain(rng, dim, mesh.complex().cell_count(dim));
}

template <class Scalar>
BasicCochain<Scalar> load_field(const RunConfig& cfg, const TorusMesh& mesh,
                                const std::string& source) {
    if (source.empty()) throw Unsupported("no input field given");
    if (const auto deg = generator_degree(source)) {
        if (*deg > mesh.n()) throw Unsupported("generator degree exceeds the mesh dimension");
        SeededRng rng(cfg.seed);
        return make_field(mesh, *deg, rng, Scalar{});
    }
    auto in = open_input(source);
    return read_field<Scalar>(in, mesh);
}

/// "random" or "random:<count>" draws that many same-sign cells; anything
/// else is a chain file path.
inline Chain load_chain(const RunConfig& cfg, const TorusMesh& mesh, int dim) {
    if (cfg.chain.empty()) throw Unsupported("no cell collection given");
    if (cfg.chain == "random" || cfg.chain.compare(0, 7, "random:") == 0) {
        std::int64_t count = 20;
        if (cfg.chain.size() > 7) {
            const std::string tail = cfg.chain.substr(7);
            errno = 0;
            char* end = nullptr;
            count = std::strtoll(tail.c_str(), &end, 10);
            if (tail.empty() || end != tail.c_str() + tail.size() || count < 1)
                throw Unsupported("bad collection size '" + tail + "'");
        }
        SeededRng rng(cfg.seed + 1);  // decoupled from the field stream
        Chain out(dim);
        const std::int64_t cells = static_cast<std::int64_t>(mesh.complex().cell_count(dim));
        for (std::int64_t i = 0; i < count; ++i)
            out.add_term(static_cast<std::size_t>(rng.int_in(0, cells - 1)), +1);
        return out;
    }
    auto in = open_input(cfg.chain);
    Chain out = read_chain(in, mesh.complex());
    if (out.dim != dim) throw DimensionError("collection has the wrong cell dimension");
    return out;
}

inline nlohmann::json manifest_base(const RunConfig& cfg) {
    nlohmann::json m;
    m["tool"] = kLibraryName;
    m["version"] = kVersion;
    m["command"] = cfg.command;
    m["n"] = cfg.n;
    m["N"] = cfg.N;
    m["mode"] = cfg.mode;
    m["seed"] = cfg.seed;
    m["tolerance"] = cfg.tolerance;
    if (!cfg.op.empty()) m["op"] = cfg.op;
    if (!cfg.field.empty()) m["field"] = cfg.field;
    if (!cfg.chain.empty()) m["collection"] = cfg.chain;
    if (!cfg.complex_path.empty()) m["complex"] = cfg.complex_path;
    m["outputs"] = nlohmann::json::array();
    return m;
}

inline void write_manifest(const RunConfig& cfg, const nlohmann::json& m) {
    auto out = open_output(cfg, "manifest.json");
    out << m.dump(2) << "\n";
}

inline TorusMesh mesh_from(const RunConfig& cfg) { return build_torus(cfg.n, cfg.N); }

inline int run_build(const RunConfig& cfg, std::ostream& out) {
    const TorusMesh mesh = mesh_from(cfg);
    auto m = manifest_base(cfg);
    {
        auto file = open_output(cfg, "complex.txt");
        write_complex(file, mesh.complex());
    }
    m["outputs"].push_back("complex.txt");
    out << "built T^" << cfg.n << "_" << cfg.N << ":";
    for (int k = 0; k <= cfg.n; ++k) out << ' ' << mesh.complex().cell_count(k);
    out << " cells by dimension\n";
    write_manifest(cfg, m);
    return 0;
}

inline int run_validate(const RunConfig& cfg, std::ostream& out) {
    std::optional<TorusMesh> mesh;
    std::optional<CubicComplex> loaded;
    if (!cfg.complex_path.empty()) {
        auto in = open_input(cfg.complex_path);
        loaded = read_complex(in);
    } else {
        mesh = mesh_from(cfg);
    }
    const CubicComplex& C = loaded ? *loaded : mesh->complex();
    const ValidationReport report = validate_complex(C);
    const auto line = [&out](const char* name, bool ok) {
        out << name << ": " << (ok ? "pass" : "FAIL") << "\n";
    };
    line("closure", report.closure_ok);
    line("intersections", report.intersection_ok);
    line("manifold", report.manifold_ok);
    line("orientability", report.orientable_ok);
    for (const auto& issue : report.issues) out << "  " << issue << "\n";
    auto m = manifest_base(cfg);
    m["results"] = {{"closure", report.closure_ok},
                    {"intersections", report.intersection_ok},
                    {"manifold", report.manifold_ok},
                    {"orientability", report.orientable_ok},
                    {"passed", report.all_passed()}};
    write_manifest(cfg, m);
    return report.all_passed() ? 0 : 1;
}

template <class Scalar>
int run_apply(const RunConfig& cfg, std::ostream& out) {
    const TorusMesh mesh = mesh_from(cfg);
    const BasicCochain<Scalar> field = load_field<Scalar>(cfg, mesh, cfg.field);
    BasicCochain<Scalar> result(0, 0);
    if (cfg.op == "grad") {
        result = grad(mesh, field);
    } else if (cfg.op == "curl") {
        result = curl(mesh, field);
    } else if (cfg.op == "div1") {
        result = div1(mesh, field);
    } else if (cfg.op == "div2") {
        result = div2(mesh, field);
    } else if (cfg.op == "delta-cell-to-face") {
        result = delta_cell_to_face(mesh, field);
    } else if (cfg.op == "delta-face-to-edge") {
        result = delta_face_to_edge(mesh, field);
    } else if (cfg.op == "d" || cfg.op == "delta") {
        const OperatorBundle ops = assemble_operators(mesh.complex());
        if (cfg.op == "d" && field.dim == mesh.n())
            throw Unsupported("d of a top-degree field is empty");
        if (cfg.op == "delta" && field.dim == 0)
            throw Unsupported("delta of a vertex field is empty");
        result = cfg.op == "d" ? apply_d(field, ops) : apply_delta(field, ops);
    } else {
        throw Unsupported("unknown operation '" + cfg.op + "'");
    }
    const std::string name = "apply-" + cfg.op + ".txt";
    {
        auto file = open_output(cfg, name);
        write_field(file, mesh, result);
    }
    out << cfg.op << ": degree " << field.dim << " -> " << result.dim << ", " << name << "\n";
    auto m = manifest_base(cfg);
    m["outputs"].push_back(name);
    m["results"] = {{"input-degree", field.dim}, {"output-degree", result.dim}};
    write_manifest(cfg, m);
    return 0;
}

inline int run_decompose(const RunConfig& cfg, std::ostream& out) {
    const TorusMesh mesh = mesh_from(cfg);
    const OperatorBundle ops = assemble_operators(mesh.complex());
    const std::string source =
        cfg.field.empty() ? "random" + std::to_string(cfg.degree) + "form" : cfg.field;
    Cochain omega(0, 0);
    if (cfg.mode == "exact")
        omega = to_double(load_field<std::int64_t>(cfg, mesh, source));
    else
        omega = load_field<double>(cfg, mesh, source);

    const HodgeSplit split = decompose(omega, ops);
    const double scale = norm(omega);
    const double recon = norm(cochain_sub(
        omega, cochain_add(cochain_add(split.exact, split.coexact), split.harmonic)));
    auto m = manifest_base(cfg);
    for (const auto& [name, part] :
         std::vector<std::pair<std::string, const Cochain*>>{{"decompose-exact.txt", &split.exact},
                                                             {"decompose-coexact.txt", &split.coexact},
                                                             {"decompose-harmonic.txt", &split.harmonic}}) {
        auto file = open_output(cfg, name);
        write_field(file, mesh, *part);
        m["outputs"].push_back(name);
    }
    m["results"] = {{"norm", scale},
                    {"reconstruction-error", recon},
                    {"orthogonality",
                     {{"exact-coexact", inner_product(split.exact, split.coexact)},
                      {"exact-harmonic", inner_product(split.exact, split.harmonic)},
                      {"coexact-harmonic", inner_product(split.coexact, split.harmonic)}}},
                    {"residual", split.residual_norm},
                    {"iterations", split.solver_iterations}};
    write_manifest(cfg, m);
    out << "decomposed a degree-" << omega.dim << " field: |exact| " << format_real(norm(split.exact))
        << ", |coexact| " << format_real(norm(split.coexact)) << ", |harmonic| "
        << format_real(norm(split.harmonic)) << ", residual " << format_real(split.residual_norm)
        << " in " << split.solver_iterations << " iterations\n";
    return 0;
}

inline int run_check(const RunConfig& cfg, std::ostream& out, bool stokes) {
    if (cfg.mode != "exact") throw Unsupported("theorem checks run in exact mode");
    const TorusMesh mesh = mesh_from(cfg);
    const std::string source =
        cfg.field.empty() ? (stokes ? "random1form" : "random2form") : cfg.field;
    const IntCochain field = load_field<std::int64_t>(cfg, mesh, source);
    RunConfig effective = cfg;
    if (effective.chain.empty()) effective.chain = "random";
    const Chain region = load_chain(effective, mesh, stokes ? 2 : 3);
    const TheoremCheck<std::int64_t> check = stokes
                                                 ? stokes_check(mesh, field, region)
                                                 : divergence_theorem_check(mesh, field, region);
    out << (stokes ? "circulation" : "flux") << " check: lhs " << check.lhs << ", rhs "
        << check.rhs << ", " << (check.equal ? "equal" : "UNEQUAL")
        << (check.same_sign ? ", same-sign collection" : ", mixed-sign collection") << "\n";
    auto m = manifest_base(cfg);
    m["results"] = {{"lhs", check.lhs},
                    {"rhs", check.rhs},
                    {"equal", check.equal},
                    {"same-sign", check.same_sign},
                    {"terms", region.coeffs.size()}};
    write_manifest(cfg, m);
    return check.equal ? 0 : 1;
}

inline int run_harmonic(const RunConfig& cfg, std::ostream& out) {
    const TorusMesh mesh = mesh_from(cfg);
    const OperatorBundle ops = assemble_operators(mesh.complex());
    KernelRank details;
    const std::size_t dim = harmonic_dimension(ops, 1, &details);
    auto m = manifest_base(cfg);
    const auto fields = harmonic_basis_1forms(mesh);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = "harmonic-phi" + std::to_string(i + 1) + ".txt";
        auto file = open_output(cfg, name);
        write_field(file, mesh, fields[i]);
        m["outputs"].push_back(name);
    }
    out << "harmonic dimension in degree 1: " << dim << " (basis of " << fields.size()
        << " coordinate fields, spectral gap " << format_real(details.gap) << ")\n";
    m["results"] = {{"dimension", dim},
                    {"threshold", details.threshold},
                    {"gap", details.gap},
                    {"basis-size", fields.size()}};
    write_manifest(cfg, m);
    return 0;
}

inline int run_export(const RunConfig& cfg, std::ostream& out) {
    const TorusMesh mesh = mesh_from(cfg);
    const OperatorBundle ops = assemble_operators(mesh.complex());
    const CubicComplex& C = mesh.complex();
    const std::string name = "torus-" + std::to_string(cfg.n) + "-" + std::to_string(cfg.N);
    auto m = manifest_base(cfg);
    const auto save = [&](const std::string& file_name, const OperatorRecord& rec) {
        auto file = open_output(cfg, file_name);
        write_operator(file, rec);
        m["outputs"].push_back(file_name);
    };
    for (int k = 1; k <= cfg.n; ++k)
        save("operator-boundary-" + std::to_string(k) + ".txt",
             {name, "boundary", k, basis_hash(C, k - 1), basis_hash(C, k), ops.boundary[k]});
    for (int k = 0; k < cfg.n; ++k)
        save("operator-d-" + std::to_string(k) + ".txt",
             {name, "d", k, basis_hash(C, k + 1), basis_hash(C, k), ops.d[k]});
    out << "exported " << (2 * cfg.n) << " operators for " << name << "\n";
    write_manifest(cfg, m);
    return 0;
}

}  // namespace detail

/// Executes one command; returns the process exit code. 0 success, 1 a
/// requested check failed, 2 bad usage or unparseable input, 3 numerical
/// non-convergence.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    try {
        if (cfg.command == "build") return detail::run_build(cfg, out);
        if (cfg.command == "validate") return detail::run_validate(cfg, out);
        if (cfg.command == "apply")
            return cfg.mode == "exact" ? detail::run_apply<std::int64_t>(cfg, out)
                                       : detail::run_apply<double>(cfg, out);
        if (cfg.command == "decompose") return detail::run_decompose(cfg, out);
        if (cfg.command == "check-stokes") return detail::run_check(cfg, out, true);
        if (cfg.command == "check-divergence") return detail::run_check(cfg, out, false);
        if (cfg.command == "harmonic") return detail::run_harmonic(cfg, out);
        if (cfg.command == "export-operators") return detail::run_export(cfg, out);
        err << "unknown command '" << cfg.command << "'\n";
        return 2;
    } catch (const SolverError& e) {
        err << "numerical failure: " << e.what() << " (residual " << format_real(e.residual)
            << ")\n";
        return 3;
    } catch (const ParseError& e) {
        err << "parse failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cubedec
