#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "cubedec/complex.hpp"
#include "cubedec/cube.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/geometry.hpp"
#include "cubedec/simplex.hpp"

namespace cubedec {

/// Coordinates for a vertex in some local chart of the complex. A chart only
/// has to cover the closed star of the cell whose dual is being built.
using ChartFn = std::function<std::vector<double>(VertexId)>;

/// One simplicial piece of a dual cell: the barycenters of an ascending chain
/// of cells c_k < c_{k+1} < ... < c_n, one cell per dimension, with the sign
/// that orients the piece consistently across the whole dual cell.
struct DualPiece {
    std::vector<std::size_t> flag;                 // cell index per dimension k..n
    std::vector<std::vector<double>> barycenters;  // chart coordinates, same order
    int sign = +1;
};

struct DualCell {
    int primal_dim = 0;
    std::size_t primal_index = 0;
    int dim = 0;  // n - primal_dim
    std::vector<DualPiece> pieces;
};

namespace detail {

inline std::vector<double> cell_barycenter(const OrientedCube& c, const ChartFn& chart) {
    auto corners = c.corners();
    std::vector<double> b = chart(corners[0]);
    for (std::size_t i = 1; i < corners.size(); ++i) {
        auto p = chart(corners[i]);
        if (p.size() != b.size()) throw DimensionError("chart dimension varies across vertices");
        for (std::size_t j = 0; j < b.size(); ++j) b[j] += p[j];
    }
    for (double& x : b) x /= static_cast<double>(corners.size());
    return b;
}

inline void collect_flags(const CubicComplex& C, int dim, std::size_t idx,
                          std::vector<std::size_t>& trail,
                          std::vector<std::vector<std::size_t>>& out) {
    trail.push_back(idx);
    if (dim == C.dim()) {
        out.push_back(trail);
    } else {
        for (const auto& [coface, sign] : C.cofaces(dim, idx)) {
            (void)sign;
            collect_flags(C, dim + 1, coface, trail, out);
        }
    }
    trail.pop_back();
}

/// Chart coordinates of a listing of + the cell's orientation class: the
/// first decomposition simplex already carries the cube's sign, and
/// oriented_tuple folds that sign into the vertex order.
inline std::vector<std::vector<double>> positive_listing_coords(const OrientedCube& c,
                                                                const ChartFn& chart) {
    const OrientedSimplex rep = simplicial_decomposition(c).front();
    std::vector<std::vector<double>> pts;
    for (VertexId v : rep.oriented_tuple()) pts.push_back(chart(v));
    return pts;
}

}  // namespace detail

/// Barycentric dual of the k-cell at index i, taken with positive
/// orientation. Each flag of cells through the top dimension contributes one
/// piece; the piece sign makes (v_0..v_{k-1}, b_k, ..., b_n) consistent with
/// the top cell whenever (v_0..v_{k-1}, b_k) is consistent with the k-cell.
inline DualCell dual_cell(const CubicComplex& C, int k, std::size_t i, const ChartFn& chart) {
    const int n = C.dim();
    if (k < 0 || k > n) throw InvalidDimension("cell dimension out of range");
    if (i >= C.cell_count(k)) throw InvalidDimension("cell index out of range");

    DualCell out;
    out.primal_dim = k;
    out.primal_index = i;
    out.dim = n - k;

    std::vector<std::vector<std::size_t>> flags;
    std::vector<std::size_t> trail;
    detail::collect_flags(C, k, i, trail, flags);

    for (const auto& flag : flags) {
        DualPiece piece;
        piece.flag = flag;
        for (int j = k; j <= n; ++j)
            piece.barycenters.push_back(
                detail::cell_barycenter(C.cell(j, flag[static_cast<std::size_t>(j - k)]), chart));

        const OrientedCube& top = C.cell(n, flag.back());
        const auto top_listing = detail::positive_listing_coords(top, chart);
        const int top_orient = embedded_orientation_sign_points(top_listing);

        int anchor_sign = +1;
        std::vector<std::vector<double>> span_points;
        if (k >= 1) {
            const auto base_listing = detail::positive_listing_coords(C.cell(k, i), chart);
            std::vector<std::vector<double>> anchored(base_listing.begin(),
                                                      base_listing.end() - 1);
            anchored.push_back(piece.barycenters.front());
            anchor_sign = detail::span_pairing_sign(anchored, base_listing);
            span_points = std::move(anchored);
            span_points.pop_back();
        }
        for (const auto& b : piece.barycenters) span_points.push_back(b);

        piece.sign = anchor_sign * embedded_orientation_sign_points(span_points) * top_orient;
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

inline DualCell dual_cell(const CubicComplex& C, int k, std::size_t i,
                          const Embedding& embedding) {
    return dual_cell(C, k, i, [&embedding](VertexId v) { return detail::coords_of(v, embedding); });
}

/// Signed sum of the piece boundaries, keyed by the surviving chain levels as
/// (dimension, cell index) pairs. Interior faces cancel; on a closed manifold
/// only faces that drop the bottom level remain.
inline std::map<std::vector<std::pair<int, std::size_t>>, int> dual_boundary_terms(
    const DualCell& dc) {
    std::map<std::vector<std::pair<int, std::size_t>>, int> acc;
    const std::size_t m = static_cast<std::size_t>(dc.dim);
    if (m == 0) return acc;
    for (const auto& piece : dc.pieces) {
        for (std::size_t drop = 0; drop <= m; ++drop) {
            std::vector<std::pair<int, std::size_t>> key;
            for (std::size_t j = 0; j <= m; ++j) {
                if (j == drop) continue;
                key.emplace_back(dc.primal_dim + static_cast<int>(j), piece.flag[j]);
            }
            const int parity = (drop % 2 == 0) ? +1 : -1;
            acc[key] += piece.sign * parity;
        }
    }
    for (auto it = acc.begin(); it != acc.end();)
        it = (it->second == 0) ? acc.erase(it) : std::next(it);
    return acc;
}

}  // namespace cubedec
