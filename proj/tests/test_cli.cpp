#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cubedec/cli.hpp"
#include "cubedec/hodge.hpp"
#include "cubedec/io.hpp"
#include "cubedec/random.hpp"
#include "cubedec/torus.hpp"
#include "cubedec/torus_calculus.hpp"

using namespace cubedec;

namespace {

std::string fresh_dir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path() / ("cubedec-cli-" + tag);
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);
    return base.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

nlohmann::json manifest_of(const std::string& dir) {
    return nlohmann::json::parse(slurp(dir + "/manifest.json"));
}

int quiet_run(const RunConfig& cfg) {
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    INFO("stdout: " << out.str() << "\nstderr: " << err.str());
    return code;
}

}  // namespace

TEST_CASE("build writes a complex file and a manifest") {
    RunConfig cfg;
    cfg.command = "build";
    cfg.n = 2;
    cfg.N = 3;
    cfg.output_dir = fresh_dir("build");
    REQUIRE(quiet_run(cfg) == 0);

    std::ifstream in(cfg.output_dir + "/complex.txt");
    REQUIRE(in);
    const CubicComplex C = read_complex(in);
    CHECK(C == build_torus(2, 3).complex());

    const auto m = manifest_of(cfg.output_dir);
    CHECK(m["command"] == "build");
    CHECK(m["version"] == kVersion);
    CHECK(m["outputs"][0] == "complex.txt");
}

TEST_CASE("usage and parameter failures exit with code 2") {
    RunConfig cfg;
    cfg.command = "no-such-command";
    CHECK(quiet_run(cfg) == 2);

    cfg.command = "build";
    cfg.n = 2;
    cfg.N = 2;  // too coarse for the duality chart
    cfg.output_dir = fresh_dir("small");
    CHECK(quiet_run(cfg) == 2);
    cfg.n = 4;
    cfg.N = 4;
    CHECK(quiet_run(cfg) == 2);

    cfg = RunConfig{};
    cfg.command = "apply";
    cfg.n = 2;
    cfg.N = 3;
    cfg.op = "grad";
    cfg.field = "/nonexistent/field.txt";
    cfg.output_dir = fresh_dir("missing");
    CHECK(quiet_run(cfg) == 2);
    cfg.field = "random0form";
    cfg.op = "frobnicate";
    CHECK(quiet_run(cfg) == 2);
    cfg.op = "d";
    cfg.field = "random2form";  // top degree on a 2-torus
    CHECK(quiet_run(cfg) == 2);
}

TEST_CASE("validate accepts the torus and rejects a bare square") {
    RunConfig cfg;
    cfg.command = "validate";
    cfg.n = 3;
    cfg.N = 3;
    cfg.output_dir = fresh_dir("validate-good");
    REQUIRE(quiet_run(cfg) == 0);
    CHECK(manifest_of(cfg.output_dir)["results"]["passed"] == true);

    const std::string dir = fresh_dir("validate-bad");
    {
        const CubicComplex lone =
            CubicComplex::from_cells(2, {OrientedCube::square_from_cycle(0, 1, 2, 3)});
        std::ofstream out(dir + "/lone.txt");
        write_complex(out, lone);
    }
    RunConfig bad;
    bad.command = "validate";
    bad.complex_path = dir + "/lone.txt";
    bad.output_dir = dir;
    CHECK(quiet_run(bad) == 1);
    CHECK(manifest_of(dir)["results"]["manifold"] == false);
}

TEST_CASE("apply reproduces the library stencils on generated input") {
    RunConfig cfg;
    cfg.command = "apply";
    cfg.n = 3;
    cfg.N = 4;
    cfg.op = "curl";
    cfg.field = "random1form";
    cfg.seed = 99;
    cfg.output_dir = fresh_dir("apply");
    REQUIRE(quiet_run(cfg) == 0);

    const TorusMesh mesh = build_torus(3, 4);
    SeededRng rng(99);
    const IntCochain j = random_int_cochain(rng, 1, mesh.complex().cell_count(1));
    std::ifstream in(cfg.output_dir + "/apply-curl.txt");
    REQUIRE(in);
    CHECK(read_field<std::int64_t>(in, mesh) == curl(mesh, j));
    CHECK(manifest_of(cfg.output_dir)["results"]["output-degree"] == 2);
}

TEST_CASE("decompose emits three orthogonal component files deterministically") {
    RunConfig cfg;
    cfg.command = "decompose";
    cfg.n = 2;
    cfg.N = 3;
    cfg.seed = 7;
    cfg.mode = "float";
    cfg.output_dir = fresh_dir("decompose-a");
    REQUIRE(quiet_run(cfg) == 0);

    const TorusMesh mesh = build_torus(2, 3);
    Cochain parts[3] = {Cochain(0, 0), Cochain(0, 0), Cochain(0, 0)};
    const char* names[3] = {"decompose-exact.txt", "decompose-coexact.txt",
                            "decompose-harmonic.txt"};
    for (int i = 0; i < 3; ++i) {
        std::ifstream in(cfg.output_dir + "/" + names[i]);
        REQUIRE(in);
        parts[i] = read_field<double>(in, mesh);
    }
    SeededRng rng(7);
    const Cochain omega = random_real_cochain(rng, 1, mesh.complex().cell_count(1));
    const double scale = norm(omega);
    const Cochain sum = cochain_add(cochain_add(parts[0], parts[1]), parts[2]);
    CHECK(norm(cochain_sub(omega, sum)) <= 1e-10 * scale);
    CHECK(std::abs(inner_product(parts[0], parts[1])) <= 1e-10 * scale * scale);

    const auto m = manifest_of(cfg.output_dir);
    CHECK(m["results"]["residual"].get<double>() <= 1e-12);
    CHECK(std::abs(m["results"]["orthogonality"]["exact-coexact"].get<double>()) <=
          1e-10 * scale * scale);

    // byte-identical rerun
    RunConfig rerun = cfg;
    rerun.output_dir = fresh_dir("decompose-b");
    REQUIRE(quiet_run(rerun) == 0);
    for (const char* name : names)
        CHECK(slurp(rerun.output_dir + "/" + std::string(name)) ==
              slurp(cfg.output_dir + "/" + std::string(name)));
}

TEST_CASE("theorem checks pass through the tool") {
    RunConfig cfg;
    cfg.command = "check-stokes";
    cfg.n = 3;
    cfg.N = 4;
    cfg.seed = 11;
    cfg.output_dir = fresh_dir("stokes");
    REQUIRE(quiet_run(cfg) == 0);
    auto m = manifest_of(cfg.output_dir);
    CHECK(m["results"]["equal"] == true);
    CHECK(m["results"]["same-sign"] == true);

    // explicit files instead of generators
    const TorusMesh mesh = build_torus(3, 4);
    SeededRng rng(12);
    const IntCochain j = random_int_cochain(rng, 1, mesh.complex().cell_count(1));
    Chain patch(2);
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) patch.add_term(mesh.face_index({u, v, 2}, 3), +1);
    const std::string dir = fresh_dir("stokes-files");
    {
        std::ofstream ff(dir + "/j.txt");
        write_field(ff, mesh, j);
        std::ofstream cf(dir + "/patch.txt");
        write_chain(cf, mesh.complex(), patch);
    }
    RunConfig files;
    files.command = "check-stokes";
    files.n = 3;
    files.N = 4;
    files.field = dir + "/j.txt";
    files.chain = dir + "/patch.txt";
    files.output_dir = dir;
    REQUIRE(quiet_run(files) == 0);
    CHECK(manifest_of(dir)["results"]["equal"] == true);

    RunConfig flux;
    flux.command = "check-divergence";
    flux.n = 3;
    flux.N = 4;
    flux.seed = 13;
    flux.output_dir = fresh_dir("flux");
    REQUIRE(quiet_run(flux) == 0);
    CHECK(manifest_of(flux.output_dir)["results"]["equal"] == true);

    flux.n = 2;
    flux.N = 3;
    CHECK(quiet_run(flux) == 2);  // flux checks need three dimensions

    RunConfig wrong = files;
    wrong.mode = "float";
    CHECK(quiet_run(wrong) == 2);  // checks are exact-only
}

TEST_CASE("harmonic reports the dimension and emits the basis") {
    RunConfig cfg;
    cfg.command = "harmonic";
    cfg.n = 3;
    cfg.N = 3;
    cfg.output_dir = fresh_dir("harmonic");
    REQUIRE(quiet_run(cfg) == 0);
    const auto m = manifest_of(cfg.output_dir);
    CHECK(m["results"]["dimension"] == 3);
    CHECK(m["results"]["basis-size"] == 3);

    const TorusMesh mesh = build_torus(3, 3);
    const auto basis = harmonic_basis_1forms(mesh);
    for (int i = 0; i < 3; ++i) {
        std::ifstream in(cfg.output_dir + "/harmonic-phi" + std::to_string(i + 1) + ".txt");
        REQUIRE(in);
        CHECK(read_field<std::int64_t>(in, mesh) == basis[i]);
    }
}

TEST_CASE("exported operators re-import with matching hashes") {
    RunConfig cfg;
    cfg.command = "export-operators";
    cfg.n = 2;
    cfg.N = 3;
    cfg.output_dir = fresh_dir("export");
    REQUIRE(quiet_run(cfg) == 0);

    const TorusMesh mesh = build_torus(2, 3);
    const OperatorBundle ops = assemble_operators(mesh.complex());
    std::ifstream in(cfg.output_dir + "/operator-boundary-1.txt");
    REQUIRE(in);
    const OperatorRecord rec = read_operator(in);
    CHECK(rec.complex_name == "torus-2-3");
    CHECK(rec.row_basis == basis_hash(mesh.complex(), 0));
    CHECK(rec.col_basis == basis_hash(mesh.complex(), 1));
    const IntMatrix diff = rec.matrix - ops.boundary[1];
    std::int64_t drift = 0;
    for (int col = 0; col < diff.outerSize(); ++col)
        for (IntMatrix::InnerIterator it(diff, col); it; ++it) drift += std::abs(it.value());
    CHECK(drift == 0);

    std::ifstream din(cfg.output_dir + "/operator-d-1.txt");
    REQUIRE(din);
    CHECK(read_operator(din).op == "d");
    CHECK(manifest_of(cfg.output_dir)["outputs"].size() == 4);
}
