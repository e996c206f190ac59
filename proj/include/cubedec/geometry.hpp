#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "cubedec/cube.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/simplex.hpp"

namespace cubedec {

using Embedding = std::map<VertexId, std::vector<double>>;

namespace detail {

/// Rank of the affine span direction space of a point set, by Gaussian
/// elimination on the edge vectors from points[0]. Pivots below
/// eps * (largest entry) count as zero.
inline std::size_t affine_rank(const std::vector<std::vector<double>>& points, double eps = 1e-9) {
    if (points.size() < 2) return 0;
    const std::size_t d = points[0].size();
    std::vector<std::vector<double>> rows(points.size() - 1, std::vector<double>(d));
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) {
            rows[i][j] = points[i + 1][j] - points[0][j];
            scale = std::max(scale, std::abs(rows[i][j]));
        }
    if (scale == 0.0) return 0;
    const double tol = eps * scale;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
        if (std::abs(rows[pivot][col]) <= tol) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const double f = rows[r][col] / rows[rank][col];
            for (std::size_t c = col; c < d; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

inline std::vector<double> coords_of(VertexId v, const Embedding& embedding) {
    auto it = embedding.find(v);
    if (it == embedding.end()) throw NeedsEmbedding("vertex has no coordinates");
    return it->second;
}

inline std::vector<std::vector<double>> tuple_coords(const std::vector<VertexId>& tuple,
                                                     const Embedding& embedding) {
    std::vector<std::vector<double>> out;
    out.reserve(tuple.size());
    for (VertexId v : tuple) out.push_back(coords_of(v, embedding));
    return out;
}

/// Sign of det(A B^T) for the edge matrices of two ordered point tuples whose
/// row spans coincide; this is the relative orientation of the two tuples
/// inside their common k-plane.
inline int span_pairing_sign(const std::vector<std::vector<double>>& a,
                             const std::vector<std::vector<double>>& b) {
    const std::size_t k = a.size() - 1;
    const std::size_t d = a[0].size();
    std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t c = 0; c < d; ++c)
                m[i][j] += (a[i + 1][c] - a[0][c]) * (b[j + 1][c] - b[0][c]);
    const double det = determinant(std::move(m));
    if (det == 0.0) throw NotIndependent("degenerate span pairing");
    return det > 0.0 ? +1 : -1;
}

}  // namespace detail

/// True when both simplices span the same k-dimensional plane of the
/// embedding. Throws NotIndependent if either simplex is degenerate.
inline bool is_comparable(const OrientedSimplex& a, const OrientedSimplex& b,
                          const Embedding& embedding) {
    if (a.dim() != b.dim()) return false;
    const std::size_t k = static_cast<std::size_t>(a.dim());
    auto pa = detail::tuple_coords(a.vertices(), embedding);
    auto pb = detail::tuple_coords(b.vertices(), embedding);
    if (detail::affine_rank(pa) != k || detail::affine_rank(pb) != k)
        throw NotIndependent("simplex does not span a k-plane");
    auto combined = pa;
    combined.insert(combined.end(), pb.begin(), pb.end());
    return detail::affine_rank(combined) == k;
}

/// Comparable with matching embedded orientations.
inline bool is_consistent(const OrientedSimplex& a, const OrientedSimplex& b,
                          const Embedding& embedding) {
    if (!is_comparable(a, b, embedding)) return false;
    if (a.dim() == 0) return a.sign() == b.sign();
    auto pa = detail::tuple_coords(a.oriented_tuple(), embedding);
    auto pb = detail::tuple_coords(b.oriented_tuple(), embedding);
    return detail::span_pairing_sign(pa, pb) == +1;
}

/// Flat embedded cubes spanning one common k-plane.
inline bool is_comparable(const OrientedCube& a, const OrientedCube& b,
                          const Embedding& embedding) {
    if (a.dim() != b.dim()) return false;
    const std::size_t k = static_cast<std::size_t>(a.dim());
    auto pa = detail::tuple_coords(a.corners(), embedding);
    auto pb = detail::tuple_coords(b.corners(), embedding);
    if (detail::affine_rank(pa) != k || detail::affine_rank(pb) != k)
        throw NotIndependent("cube does not span a k-plane");
    auto combined = pa;
    combined.insert(combined.end(), pb.begin(), pb.end());
    return detail::affine_rank(combined) == k;
}

/// Orientation comparison runs through one decomposition simplex per cube;
/// within a flat cube all decomposition simplices agree.
inline bool is_consistent(const OrientedCube& a, const OrientedCube& b,
                          const Embedding& embedding) {
    if (!is_comparable(a, b, embedding)) return false;
    if (a.dim() == 0) return a.sign() == b.sign();
    auto sa = simplicial_decomposition(a).front();
    auto sb = simplicial_decomposition(b).front();
    auto pa = detail::tuple_coords(sa.oriented_tuple(), embedding);
    auto pb = detail::tuple_coords(sb.oriented_tuple(), embedding);
    return detail::span_pairing_sign(pa, pb) == +1;
}

}  // namespace cubedec
