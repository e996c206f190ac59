#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "cubedec/errors.hpp"
#include "cubedec/simplex.hpp"

namespace cubedec {

namespace detail {

/// Insert bit `side` at position `axis`, shifting higher bits up.
inline unsigned insert_bit(unsigned code, int axis, unsigned side) {
    const unsigned low = code & ((1u << axis) - 1u);
    const unsigned high = code >> axis;
    return low | (side << axis) | (high << (axis + 1));
}

inline int popcount(unsigned v) { return std::popcount(v); }

}  // namespace detail

/// An oriented k-cube over 2^k vertex ids.
///
/// Internally the vertices are held in a canonical corner labeling: corner
/// code b has vertex corners()[b], bit j of b walks along combinatorial axis
/// j, the smallest vertex id sits at corner 0 and its neighbors appear in
/// ascending id order along axes 0,1,... Any input corner order is reduced to
/// this labeling at construction, folding the relabeling's parity into the
/// sign. Orientation-class equality is then a sign comparison.
class OrientedCube {
public:
    OrientedCube() = default;

    /// Build from vertices listed in corner-code order (bit j of the position
    /// selects axis j). `sign` orients the cube relative to that listing.
    static OrientedCube from_corner_order(std::vector<VertexId> vertices, int sign = +1) {
        const std::size_t m = vertices.size();
        if (m == 0 || (m & (m - 1)) != 0) throw InvalidCube("vertex count must be a power of two");
        int k = 0;
        while ((1u << k) < m) ++k;
        {
            std::vector<VertexId> sorted = vertices;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidCube("repeated vertex in cube");
        }
        OrientedCube c;
        c.dim_ = k;
        c.canonicalize(std::move(vertices), sign);
        return c;
    }

    /// A quadrilateral given by its cyclic listing (v0,v1,v2,v3),
    /// i.e. the closed walk around its perimeter.
    static OrientedCube square_from_cycle(VertexId v0, VertexId v1, VertexId v2, VertexId v3,
                                          int sign = +1) {
        return from_corner_order({v0, v1, v3, v2}, sign);
    }

    int dim() const { return dim_; }
    int sign() const { return sign_; }

    /// Vertices in canonical corner-code order.
    const std::vector<VertexId>& corners() const { return corners_; }

    /// Vertices sorted ascending (the cube's identity key).
    std::vector<VertexId> sorted_vertices() const {
        std::vector<VertexId> v = corners_;
        std::sort(v.begin(), v.end());
        return v;
    }

    OrientedCube negated() const {
        OrientedCube c(*this);
        c.sign_ = -c.sign_;
        return c;
    }

    /// +1 or -1 when `other` is the same combinatorial cube with equal or
    /// opposite orientation; throws InvalidCube otherwise.
    int orientation_sign_vs(const OrientedCube& other) const {
        if (dim_ != other.dim_ || corners_ != other.corners_)
            throw InvalidCube("cubes do not share a corner structure");
        return sign_ * other.sign_;
    }

    friend bool operator==(const OrientedCube& a, const OrientedCube& b) {
        return a.dim_ == b.dim_ && a.corners_ == b.corners_ && a.sign_ == b.sign_;
    }

    /// The facet obtained by freezing `axis` at `side`, in its own canonical
    /// positive orientation (the boundary coefficient is computed separately).
    OrientedCube facet(int axis, unsigned side) const {
        if (dim_ == 0) throw InvalidDimension("0-cube has no facets");
        std::vector<VertexId> fv(1u << (dim_ - 1));
        for (unsigned b = 0; b < fv.size(); ++b) fv[b] = corners_[detail::insert_bit(b, axis, side)];
        OrientedCube f = from_corner_order(std::move(fv), +1);
        return f.sign_ > 0 ? f : f.negated();
    }

private:
    void canonicalize(std::vector<VertexId> input, int sign);

    int dim_ = 0;
    std::vector<VertexId> corners_;
    int sign_ = +1;
};

inline void OrientedCube::canonicalize(std::vector<VertexId> input, int sign) {
    const unsigned m = 1u << dim_;
    std::map<VertexId, unsigned> input_code;
    for (unsigned b = 0; b < m; ++b) input_code[input[b]] = b;

    auto adjacent = [&](VertexId u, VertexId v) {
        return detail::popcount(input_code[u] ^ input_code[v]) == 1;
    };

    // Canonical labeling: smallest id at corner 0, its neighbors in ascending
    // order fix the axes, every deeper corner is the unique common neighbor of
    // its already-placed co-dimension-one corners.
    std::vector<VertexId> canon(m);
    canon[0] = *std::min_element(input.begin(), input.end());
    std::vector<VertexId> axis_neighbors;
    for (VertexId v : input)
        if (v != canon[0] && adjacent(canon[0], v)) axis_neighbors.push_back(v);
    if (static_cast<int>(axis_neighbors.size()) != dim_)
        throw InvalidCube("corner listing is not a hypercube");
    std::sort(axis_neighbors.begin(), axis_neighbors.end());
    for (int j = 0; j < dim_; ++j) canon[1u << j] = axis_neighbors[j];

    std::set<VertexId> placed(canon.begin(), canon.begin() + 1);
    for (int j = 0; j < dim_; ++j) placed.insert(canon[1u << j]);
    for (int count = 2; count <= dim_; ++count) {
        for (unsigned b = 0; b < m; ++b) {
            if (detail::popcount(b) != count) continue;
            std::vector<VertexId> candidates;
            for (VertexId v : input) {
                if (placed.count(v)) continue;
                bool ok = true;
                for (int j = 0; j < dim_ && ok; ++j)
                    if (b & (1u << j)) ok = adjacent(v, canon[b ^ (1u << j)]);
                if (ok) candidates.push_back(v);
            }
            if (candidates.size() != 1) throw InvalidCube("corner listing is not a hypercube");
            canon[b] = candidates[0];
            placed.insert(candidates[0]);
        }
    }

    // The relabeling input -> canon is a hypercube symmetry: an axis
    // permutation followed by axis flips. Its orientation sign is
    // sgn(permutation) * (-1)^{#flips}.
    const unsigned flips = input_code[canon[0]];
    std::vector<int> axis_perm(dim_);
    for (int j = 0; j < dim_; ++j) {
        const unsigned d = input_code[canon[1u << j]] ^ flips;
        if (detail::popcount(d) != 1) throw InvalidCube("corner listing is not a hypercube");
        axis_perm[j] = std::countr_zero(d);
    }
    for (unsigned b = 0; b < m; ++b) {
        unsigned mapped = flips;
        for (int j = 0; j < dim_; ++j)
            if (b & (1u << j)) mapped ^= (1u << axis_perm[j]);
        if (input_code[canon[b]] != mapped) throw InvalidCube("corner listing is not a hypercube");
    }
    int rel = (detail::popcount(flips) % 2 == 0) ? +1 : -1;
    {
        std::vector<VertexId> perm_as_ids(axis_perm.begin(), axis_perm.end());
        rel *= permutation_parity(perm_as_ids);
    }

    corners_ = std::move(canon);
    sign_ = sign * rel;
}

/// Kuhn decomposition: one k-simplex per coordinate-permutation path from
/// corner 0 to the far corner, oriented by the permutation's parity times the
/// cube's sign. Internally shared (k-1)-faces cancel pairwise.
inline std::vector<OrientedSimplex> simplicial_decomposition(const OrientedCube& cube) {
    const int k = cube.dim();
    if (k == 0) return {OrientedSimplex::from_tuple({cube.corners()[0]}, cube.sign())};
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<OrientedSimplex> out;
    do {
        std::vector<VertexId> verts;
        verts.reserve(k + 1);
        unsigned code = 0;
        verts.push_back(cube.corners()[0]);
        for (int t = 0; t < k; ++t) {
            code |= (1u << perm[t]);
            verts.push_back(cube.corners()[code]);
        }
        std::vector<VertexId> perm_ids(perm.begin(), perm.end());
        out.push_back(
            OrientedSimplex::from_tuple(std::move(verts), permutation_parity(perm_ids) * cube.sign()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Boundary at simplex granularity: sum of the decomposition's simplex
/// boundaries. Internal faces cancel; what remains tiles the cube's facets.
/// Decomposition-independent, so it doubles as the orientation-class key.
inline SimplexChain boundary_cube_simplices(const OrientedCube& cube) {
    SimplexChain out;
    if (cube.dim() == 0) return out;
    for (const auto& s : simplicial_decomposition(cube)) {
        const SimplexChain b = boundary_simplex(s);
        for (const auto& [key, coeff] : b.terms())
            out.add(OrientedSimplex::from_tuple(key), coeff);
    }
    return out;
}

/// One boundary term: a facet in canonical positive orientation plus its
/// induced coefficient.
struct CubeBoundaryTerm {
    OrientedCube face;
    int coeff;
};

/// Boundary of an oriented cube, grouped per facet. Each facet's share of the
/// simplex-level boundary is matched against the facet's own decomposition;
/// the common sign is the induced coefficient.
inline std::vector<CubeBoundaryTerm> boundary_cube(const OrientedCube& cube) {
    std::vector<CubeBoundaryTerm> out;
    const int k = cube.dim();
    if (k == 0) return out;

    SimplexChain rest = boundary_cube_simplices(cube);
    for (int axis = 0; axis < k; ++axis) {
        for (unsigned side = 0; side <= 1; ++side) {
            OrientedCube face = cube.facet(axis, side);
            std::set<VertexId> fset;
            for (VertexId v : face.corners()) fset.insert(v);

            std::map<SimplexChain::Key, int> expected;
            for (const auto& s : simplicial_decomposition(face)) expected[s.vertices()] = s.sign();

            int common = 0;
            for (const auto& [key, want_sign] : expected) {
                auto it = rest.terms().find(key);
                if (it == rest.terms().end()) throw InvalidCube("boundary does not tile facets");
                const int got = static_cast<int>(it->second);
                const int rel = got * want_sign;
                if (common == 0)
                    common = rel;
                else if (common != rel)
                    throw InvalidCube("facet orientations disagree within one facet");
            }
            for (const auto& [key, want_sign] : expected)
                rest.add(OrientedSimplex::from_tuple(key, want_sign), -common);
            out.push_back({std::move(face), common});
        }
    }
    if (!rest.empty()) throw InvalidCube("boundary has terms outside all facets");
    return out;
}

/// j-faces of an oriented cube with induced signs. For j = k-1 these are the
/// boundary coefficients. Deeper faces have no canonical induced orientation;
/// they are reported with the sign of the first descending facet chain found,
/// walking facets in canonical order, which makes the result deterministic.
inline std::vector<CubeBoundaryTerm> faces(const OrientedCube& cube, int j) {
    const int k = cube.dim();
    if (j < 0 || j >= k) throw InvalidDimension("face dimension out of range");
    if (j == k - 1) return boundary_cube(cube);

    std::vector<CubeBoundaryTerm> out;
    std::set<std::vector<VertexId>> seen;
    for (const auto& [face, coeff] : boundary_cube(cube)) {
        OrientedCube oriented = coeff > 0 ? face : face.negated();
        for (auto& deep : faces(oriented, j)) {
            auto key = deep.face.sorted_vertices();
            if (seen.insert(key).second) out.push_back(std::move(deep));
        }
    }
    std::sort(out.begin(), out.end(), [](const CubeBoundaryTerm& a, const CubeBoundaryTerm& b) {
        return a.face.sorted_vertices() < b.face.sorted_vertices();
    });
    return out;
}

}  // namespace cubedec
