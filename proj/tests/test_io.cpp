#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cubedec/io.hpp"
#include "cubedec/random.hpp"
#include "cubedec/torus.hpp"

using namespace cubedec;

namespace {

std::vector<std::tuple<int, int, std::int64_t>> triplets(const IntMatrix& m) {
    IntMatrix c = m;
    c.makeCompressed();
    std::vector<std::tuple<int, int, std::int64_t>> out;
    for (int col = 0; col < c.outerSize(); ++col)
        for (IntMatrix::InnerIterator it(c, col); it; ++it)
            out.emplace_back(static_cast<int>(it.row()), col, it.value());
    return out;
}

}  // namespace

TEST_CASE("real numbers survive the decimal round trip bitwise") {
    for (const double v : {0.0, -0.0, 1.0 / 3.0, 1e-17, -2.5e300, 3.141592653589793,
                           5e-324, 1234567890.12345}) {
        const std::string s = format_real(v);
        char* end = nullptr;
        const double back = std::strtod(s.c_str(), &end);
        CHECK(end == s.c_str() + s.size());
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
}

TEST_CASE("complexes round-trip through the text format") {
    const TorusMesh mesh = build_torus(2, 3);
    std::ostringstream first;
    write_complex(first, mesh.complex());

    std::istringstream in(first.str());
    const CubicComplex back = read_complex(in);
    CHECK(back == mesh.complex());

    std::ostringstream second;
    write_complex(second, back);
    CHECK(second.str() == first.str());
}

TEST_CASE("an embedded complex keeps its coordinates") {
    const OrientedCube square = OrientedCube::square_from_cycle(0, 1, 2, 3);
    Embedding emb{{0, {0.0, 0.0}}, {1, {1.0, 0.0}}, {2, {1.0, 1.0}}, {3, {0.0, 1.0 / 3.0}}};
    const CubicComplex C = CubicComplex::from_cells(2, {square}, true, emb);

    std::ostringstream out;
    write_complex(out, C);
    std::istringstream in(out.str());
    CHECK(read_complex(in) == C);
}

TEST_CASE("complex parse failures carry line numbers") {
    const auto fails_at = [](const std::string& text, int line) {
        std::istringstream in(text);
        try {
            read_complex(in);
            FAIL("expected a parse failure");
        } catch (const ParseError& e) {
            CHECK(e.line == line);
        }
    };
    fails_at("bogus 1\n", 1);
    fails_at("cubedec-complex 2\n", 1);
    fails_at("cubedec-complex 1\nn x\n", 2);
    fails_at("cubedec-complex 1\nn 1\ncounts 1 1\nvertices 2\n", 4);
    fails_at("cubedec-complex 1\nn 1\ncounts 1 1\nvertices 1\nv 0\ncells 1 1\nc + 0 0\nend\n", 7);

    // truncation after a healthy prefix
    const TorusMesh mesh = build_torus(1, 3);
    std::ostringstream full;
    write_complex(full, mesh.complex());
    const std::string text = full.str();
    std::istringstream in(text.substr(0, text.size() - 5));
    CHECK_THROWS_AS(read_complex(in), ParseError);
}

TEST_CASE("cochains round-trip in both scalar modes") {
    SeededRng rng(5001u);
    const TorusMesh mesh = build_torus(2, 3);
    const CubicComplex& C = mesh.complex();

    const IntCochain iv = random_int_cochain(rng, 1, C.cell_count(1));
    std::ostringstream iout;
    write_cochain(iout, C, iv);
    std::istringstream iin(iout.str());
    CHECK(read_cochain<std::int64_t>(iin, C) == iv);

    Cochain rv = random_real_cochain(rng, 2, C.cell_count(2));
    rv.values[0] = 1.0 / 3.0;
    rv.values[1] = -0.0;
    std::ostringstream rout;
    write_cochain(rout, C, rv);
    std::istringstream rin(rout.str());
    const Cochain rback = read_cochain<double>(rin, C);
    REQUIRE(rback.values.size() == rv.values.size());
    for (std::size_t i = 0; i < rv.values.size(); ++i)
        CHECK(std::memcmp(&rback.values[i], &rv.values[i], sizeof(double)) == 0);

    std::ostringstream again;
    write_cochain(again, C, rback);
    CHECK(again.str() == rout.str());

    std::istringstream wrong(iout.str());
    CHECK_THROWS_AS(read_cochain<double>(wrong, C), ParseError);  // scalar mode mismatch
}

TEST_CASE("chains round-trip with signed sparse terms") {
    const TorusMesh mesh = build_torus(3, 3);
    const CubicComplex& C = mesh.complex();
    Chain gamma(2);
    gamma.add_term(mesh.face_index({0, 0, 0}, 1), +2);
    gamma.add_term(mesh.face_index({1, 2, 0}, 3), -1);

    std::ostringstream out;
    write_chain(out, C, gamma);
    std::istringstream in(out.str());
    const Chain back = read_chain(in, C);
    CHECK(back.dim == gamma.dim);
    CHECK(back.coeffs == gamma.coeffs);

    std::istringstream alien(
        "cubedec-chain 1\ndim 1\nterms 1\nt 0 4 1\nend\n");
    CHECK_THROWS_AS(read_chain(alien, C), ParseError);  // no such edge on the torus
}

TEST_CASE("torus fields round-trip for every degree") {
    SeededRng rng(5002u);
    const TorusMesh mesh = build_torus(3, 3);
    for (int dim = 0; dim <= 3; ++dim) {
        const IntCochain f = random_int_cochain(rng, dim, mesh.complex().cell_count(dim));
        std::ostringstream out;
        write_field(out, mesh, f);
        std::istringstream in(out.str());
        CHECK(read_field<std::int64_t>(in, mesh) == f);
    }
    const Cochain rf = random_real_cochain(rng, 1, mesh.complex().cell_count(1));
    std::ostringstream out;
    write_field(out, mesh, rf);
    std::istringstream in(out.str());
    CHECK(read_field<double>(in, mesh) == rf);
}

TEST_CASE("field files wrap coordinates but reject duplicates") {
    const TorusMesh mesh = build_torus(1, 3);
    // x = 3 wraps onto x = 0, so this names vertex 0 twice
    std::istringstream dup(
        "cubedec-field 1\nn 1\nN 3\nkind vertex\nscalar int\nentries 3\n"
        "f 0 7\nf 1 8\nf 3 9\nend\n");
    CHECK_THROWS_AS(read_field<std::int64_t>(dup, mesh), ParseError);

    std::istringstream wrapped(
        "cubedec-field 1\nn 1\nN 3\nkind vertex\nscalar int\nentries 3\n"
        "f 4 8\nf 0 7\nf 2 9\nend\n");
    const IntCochain f = read_field<std::int64_t>(wrapped, mesh);
    CHECK(f.values == std::vector<std::int64_t>{7, 8, 9});

    std::istringstream off(
        "cubedec-field 1\nn 2\nN 3\nkind vertex\nscalar int\nentries 9\nend\n");
    CHECK_THROWS_AS(read_field<std::int64_t>(off, mesh), ParseError);  // mesh mismatch
}

TEST_CASE("operators round-trip with their basis hashes") {
    const TorusMesh mesh = build_torus(2, 3);
    const OperatorBundle ops = assemble_operators(mesh.complex());
    const OperatorRecord rec{"torus-2-3", "boundary", 1, basis_hash(mesh.complex(), 0),
                             basis_hash(mesh.complex(), 1), ops.boundary[1]};

    std::ostringstream out;
    write_operator(out, rec);
    std::istringstream in(out.str());
    const OperatorRecord back = read_operator(in);
    CHECK(back.complex_name == rec.complex_name);
    CHECK(back.op == rec.op);
    CHECK(back.k == rec.k);
    CHECK(back.row_basis == rec.row_basis);
    CHECK(back.col_basis == rec.col_basis);
    CHECK(triplets(back.matrix) == triplets(rec.matrix));

    std::ostringstream again;
    write_operator(again, back);
    CHECK(again.str() == out.str());

    std::istringstream oob(
        "cubedec-operator 1\ncomplex c\nop d\nk 0\nrows 2\ncols 2\n"
        "row-basis 0\ncol-basis 0\nnnz 1\nm 5 0 1\nend\n");
    CHECK_THROWS_AS(read_operator(oob), ParseError);  // triplet outside the matrix
}
