#include <CLI11.hpp>

#include "cubedec/cli.hpp"
#include "cubedec/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"discrete exterior calculus on periodic cubic lattices"};
    app.set_version_flag("--version", cubedec::kVersion);
    app.require_subcommand(1);
    cubedec::RunConfig cfg;

    const auto mesh_opts = [&cfg](CLI::App* cmd, bool required) {
        auto* n = cmd->add_option("--n", cfg.n, "lattice dimension (1..3)");
        auto* N = cmd->add_option("--N", cfg.N, "cells per axis (at least 3)");
        if (required) {
            n->required();
            N->required();
        }
    };
    const auto common_opts = [&cfg](CLI::App* cmd) {
        cmd->add_option("--output-dir", cfg.output_dir, "directory for result files");
        cmd->add_option("--mode", cfg.mode, "arithmetic mode")
            ->check(CLI::IsMember({"exact", "float"}));
        cmd->add_option("--seed", cfg.seed, "seed for generated inputs");
        cmd->add_option("--tolerance", cfg.tolerance, "reporting threshold for float residuals");
    };

    auto* build = app.add_subcommand("build", "construct a torus mesh and write it out");
    mesh_opts(build, true);
    common_opts(build);

    auto* validate = app.add_subcommand("validate", "run the complex and manifold checks");
    validate->add_option("--complex", cfg.complex_path, "complex file to check instead of a torus");
    mesh_opts(validate, false);
    common_opts(validate);

    auto* apply = app.add_subcommand("apply", "apply a named operation to a field");
    mesh_opts(apply, true);
    common_opts(apply);
    apply->add_option("--op", cfg.op, "grad, curl, div1, div2, delta-cell-to-face, delta-face-to-edge, d, delta")
        ->required();
    apply->add_option("--field", cfg.field, "field file or generator name")->required();

    auto* decompose = app.add_subcommand("decompose", "orthogonal three-way splitting of a field");
    mesh_opts(decompose, true);
    common_opts(decompose);
    decompose->add_option("--field", cfg.field, "field file or generator name");
    decompose->add_option("--degree", cfg.degree, "form degree when generating the input");

    auto* stokes = app.add_subcommand("check-stokes", "circulation identity via two code paths");
    mesh_opts(stokes, true);
    common_opts(stokes);
    stokes->add_option("--field", cfg.field, "edge field file or generator name");
    stokes->add_option("--faces", cfg.chain, "face collection file, or random[:count]");

    auto* divergence = app.add_subcommand("check-divergence", "flux identity via two code paths");
    mesh_opts(divergence, true);
    common_opts(divergence);
    divergence->add_option("--field", cfg.field, "face field file or generator name");
    divergence->add_option("--cells", cfg.chain, "cell collection file, or random[:count]");

    auto* harmonic = app.add_subcommand("harmonic", "harmonic dimension and coordinate basis");
    mesh_opts(harmonic, true);
    common_opts(harmonic);

    auto* exports = app.add_subcommand("export-operators", "triplet files for boundary and d");
    mesh_opts(exports, true);
    common_opts(exports);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return cubedec::run(cfg);
}
