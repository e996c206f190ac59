#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <vector>

#include "cubedec/cube.hpp"

using namespace cubedec;

namespace {

// Boundary at cube granularity collapsed to a map keyed by facet vertex
// tuple. Signs are relative to each facet's canonical positive orientation.
std::map<std::vector<VertexId>, int> boundary_map(const OrientedCube& c) {
    std::map<std::vector<VertexId>, int> out;
    for (const auto& [face, coeff] : boundary_cube(c)) out[face.sorted_vertices()] = coeff;
    return out;
}

OrientedCube random_relabeled(const OrientedCube& cube, std::mt19937_64& rng, int& symmetry_sign) {
    const int k = cube.dim();
    std::vector<int> perm(k);
    for (int j = 0; j < k; ++j) perm[j] = j;
    for (int j = k - 1; j > 0; --j) std::swap(perm[j], perm[static_cast<int>(rng() % (j + 1))]);
    const unsigned flips = static_cast<unsigned>(rng() % (1u << k));

    std::vector<VertexId> relabeled(1u << k);
    for (unsigned b = 0; b < relabeled.size(); ++b) {
        unsigned mapped = flips;
        for (int j = 0; j < k; ++j)
            if (b & (1u << j)) mapped ^= (1u << perm[j]);
        relabeled[b] = cube.corners()[mapped];
    }
    std::vector<VertexId> perm_ids(perm.begin(), perm.end());
    symmetry_sign = permutation_parity(perm_ids) * (std::popcount(flips) % 2 == 0 ? +1 : -1);
    return OrientedCube::from_corner_order(std::move(relabeled), cube.sign());
}

}  // namespace

TEST_CASE("square built from a cyclic vertex walk") {
    auto sq = OrientedCube::square_from_cycle(1, 2, 3, 4);
    CHECK(sq.dim() == 2);
    CHECK(sq.sorted_vertices() == std::vector<VertexId>{1, 2, 3, 4});

    // The worked boundary: (v0,v1)+(v1,v2)+(v2,v3)+(v3,v0).
    auto b = boundary_map(sq);
    CHECK(b.at({1, 2}) == +1);
    CHECK(b.at({2, 3}) == +1);
    CHECK(b.at({3, 4}) == +1);
    CHECK(b.at({1, 4}) == -1);
}

TEST_CASE("square decomposition matches the two-triangle split") {
    // Ids chosen so the walk's second vertex is the smallest: the path pair
    // through that corner is exactly {(v0,v1,v3), (v1,v2,v3)}.
    const VertexId v0 = 7, v1 = 2, v2 = 5, v3 = 9;
    auto sq = OrientedCube::square_from_cycle(v0, v1, v2, v3);
    auto dec = simplicial_decomposition(sq);
    REQUIRE(dec.size() == 2);

    std::map<std::vector<VertexId>, int> got;
    for (const auto& s : dec) got[s.vertices()] = s.sign();
    // +(v0,v1,v3) and +(v1,v2,v3), keyed by sorted tuple with listing parity.
    CHECK(got.at({2, 7, 9}) == make_simplex({7, 2, 9}).sign());
    CHECK(got.at({2, 5, 9}) == make_simplex({2, 5, 9}).sign());

    // The shared diagonal receives opposite induced orientations.
    SimplexChain inner;
    for (const auto& s : dec) {
        const SimplexChain b = boundary_simplex(s);
        for (const auto& [key, coeff] : b.terms())
            inner.add(OrientedSimplex::from_tuple(key), coeff);
    }
    CHECK(inner.terms().count({2, 9}) == 0);
    CHECK(inner.terms().size() == 4);
}

TEST_CASE("one-cube decomposes to itself") {
    auto e = OrientedCube::from_corner_order({4, 6});
    auto dec = simplicial_decomposition(e);
    REQUIRE(dec.size() == 1);
    CHECK(dec[0].vertices() == std::vector<VertexId>{4, 6});
    CHECK(dec[0].sign() == +1);

    auto rev = OrientedCube::from_corner_order({6, 4});
    CHECK(rev.orientation_sign_vs(e) == -1);
    CHECK(simplicial_decomposition(rev)[0].sign() == -1);
}

TEST_CASE("three-cube decomposition cancels internally") {
    std::vector<VertexId> corners = {0, 1, 2, 3, 4, 5, 6, 7};
    auto cube = OrientedCube::from_corner_order(corners);
    auto dec = simplicial_decomposition(cube);
    REQUIRE(dec.size() == 6);

    // Raw expansion: 24 triangles; 6 internal ones cancel in opposite pairs.
    std::map<std::vector<VertexId>, std::vector<int>> raw;
    for (const auto& s : dec) {
        const SimplexChain b = boundary_simplex(s);
        for (const auto& [key, coeff] : b.terms()) raw[key].push_back(static_cast<int>(coeff));
    }
    int shared = 0;
    for (const auto& [key, signs] : raw) {
        REQUIRE(signs.size() <= 2);
        if (signs.size() == 2) {
            ++shared;
            CHECK(signs[0] + signs[1] == 0);
        }
    }
    CHECK(shared == 6);
    CHECK(boundary_cube_simplices(cube).terms().size() == 12);
}

TEST_CASE("three-cube boundary vanishes under a second boundary") {
    auto cube = OrientedCube::from_corner_order({10, 11, 12, 13, 14, 15, 16, 17});
    auto terms = boundary_cube(cube);
    REQUIRE(terms.size() == 6);

    // Facet pairs across each axis carry opposite coefficients.
    std::map<std::vector<VertexId>, int> b = boundary_map(cube);
    int plus = 0;
    for (const auto& [key, coeff] : b) plus += (coeff == +1);
    CHECK(plus == 3);

    // Boundary of the boundary collapses to nothing.
    std::map<std::vector<VertexId>, int> edges;
    for (const auto& [face, coeff] : terms)
        for (const auto& [edge, coeff2] : boundary_cube(face)) {
            edges[edge.sorted_vertices()] += coeff * coeff2;
        }
    for (const auto& [key, total] : edges) CHECK(total == 0);

    // Linearity under negation.
    auto bneg = boundary_map(cube.negated());
    for (const auto& [key, coeff] : b) CHECK(bneg.at(key) == -coeff);
}

TEST_CASE("relative orientation of relabelings agrees with boundary chains") {
    std::mt19937_64 rng(77031u);
    auto base = OrientedCube::from_corner_order({3, 8, 1, 9, 12, 4, 6, 2});
    for (int trial = 0; trial < 50; ++trial) {
        int symmetry_sign = 0;
        auto other = random_relabeled(base, rng, symmetry_sign);
        CHECK(other.orientation_sign_vs(base) == symmetry_sign);

        // Independent oracle: the simplex-level boundary determines the
        // orientation class.
        auto ca = boundary_cube_simplices(base);
        auto cb = boundary_cube_simplices(other);
        REQUIRE(ca.terms().size() == cb.terms().size());
        int chain_sign = 0;
        for (const auto& [key, coeff] : ca.terms()) {
            const int rel = static_cast<int>(coeff) * static_cast<int>(cb.terms().at(key));
            if (chain_sign == 0) chain_sign = rel;
            CHECK(rel == chain_sign);
        }
        CHECK(chain_sign == symmetry_sign);
    }
}

TEST_CASE("faces with induced signs") {
    auto sq = OrientedCube::square_from_cycle(1, 2, 3, 4);
    auto zero_faces = faces(sq, 0);
    REQUIRE(zero_faces.size() == 4);

    auto edge = OrientedCube::from_corner_order({5, 9});
    auto ends = faces(edge, 0);
    std::map<std::vector<VertexId>, int> m;
    for (const auto& [f, s] : ends) m[f.sorted_vertices()] = s;
    CHECK(m.at({9}) == +1);
    CHECK(m.at({5}) == -1);

    CHECK_THROWS_AS(faces(sq, 2), InvalidDimension);
    CHECK_THROWS_AS(faces(sq, -1), InvalidDimension);

    // Top faces coincide with boundary coefficients.
    auto cube = OrientedCube::from_corner_order({0, 1, 2, 3, 4, 5, 6, 7});
    auto via_faces = faces(cube, 2);
    auto via_boundary = boundary_map(cube);
    for (const auto& [f, s] : via_faces) CHECK(via_boundary.at(f.sorted_vertices()) == s);
}

TEST_CASE("malformed corner listings are rejected") {
    CHECK_THROWS_AS(OrientedCube::from_corner_order({1, 2, 3}), InvalidCube);
    CHECK_THROWS_AS(OrientedCube::from_corner_order({1, 2, 2, 3}), InvalidCube);
    // A 4-cycle with crossed edges is not a square's corner listing.
    auto good = OrientedCube::square_from_cycle(1, 2, 3, 4);
    auto crossed = OrientedCube::square_from_cycle(1, 3, 2, 4);
    CHECK_THROWS_AS(good.orientation_sign_vs(crossed), InvalidCube);
}
