#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cubedec/errors.hpp"

namespace cubedec {

using VertexId = int;

/// Parity of the permutation taking `tuple` to its sorted order: +1 even, -1 odd.
/// Counts inversion pairs; quadratic, fine for the small tuples used here.
inline int permutation_parity(std::span<const VertexId> tuple) {
    int inversions = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i)
        for (std::size_t j = i + 1; j < tuple.size(); ++j)
            if (tuple[i] > tuple[j]) ++inversions;
    return (inversions % 2 == 0) ? +1 : -1;
}

/// An oriented k-simplex: the sorted vertex tuple plus the orientation sign
/// relative to that sorted order. Two orderings describe the same oriented
/// simplex exactly when they differ by an even permutation.
class OrientedSimplex {
public:
    OrientedSimplex() = default;

    /// Canonicalize an ordered vertex tuple. Throws DegenerateSimplex on
    /// repeated vertices.
    static OrientedSimplex from_tuple(std::vector<VertexId> vertices, int extra_sign = +1) {
        const int parity = permutation_parity(vertices);
        std::sort(vertices.begin(), vertices.end());
        if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
            throw DegenerateSimplex("repeated vertex in simplex");
        OrientedSimplex s;
        s.vertices_ = std::move(vertices);
        s.sign_ = parity * extra_sign;
        return s;
    }

    int dim() const { return static_cast<int>(vertices_.size()) - 1; }
    const std::vector<VertexId>& vertices() const { return vertices_; }
    int sign() const { return sign_; }

    OrientedSimplex negated() const {
        OrientedSimplex s(*this);
        s.sign_ = -s.sign_;
        return s;
    }

    /// A vertex ordering realizing this simplex's orientation class.
    std::vector<VertexId> oriented_tuple() const {
        std::vector<VertexId> t = vertices_;
        if (sign_ < 0 && t.size() >= 2) std::swap(t[0], t[1]);
        return t;
    }

    friend bool operator==(const OrientedSimplex& a, const OrientedSimplex& b) {
        return a.vertices_ == b.vertices_ && a.sign_ == b.sign_;
    }

private:
    std::vector<VertexId> vertices_;
    int sign_ = +1;
};

inline OrientedSimplex make_simplex(std::vector<VertexId> vertices) {
    return OrientedSimplex::from_tuple(std::move(vertices));
}

/// Integer formal sum of simplices, keyed by sorted vertex tuple. Orientation
/// is folded into the coefficient, so -s and s share a key.
class SimplexChain {
public:
    using Key = std::vector<VertexId>;

    void add(const OrientedSimplex& s, std::int64_t coeff = 1) {
        if (coeff == 0) return;
        auto it = terms_.find(s.vertices());
        std::int64_t c = (it == terms_.end() ? 0 : it->second) + coeff * s.sign();
        if (c == 0) {
            if (it != terms_.end()) terms_.erase(it);
        } else {
            terms_[s.vertices()] = c;
        }
    }

    const std::map<Key, std::int64_t>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    SimplexChain negated() const {
        SimplexChain out;
        for (const auto& [k, c] : terms_) out.terms_[k] = -c;
        return out;
    }

    friend bool operator==(const SimplexChain& a, const SimplexChain& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::map<Key, std::int64_t> terms_;
};

/// Alternating-sum boundary of an oriented simplex. k = 0 gives the empty chain.
inline SimplexChain boundary_simplex(const OrientedSimplex& s) {
    SimplexChain out;
    if (s.dim() == 0) return out;
    const auto tuple = s.oriented_tuple();
    int face_sign = +1;
    for (std::size_t omit = 0; omit < tuple.size(); ++omit, face_sign = -face_sign) {
        std::vector<VertexId> face;
        face.reserve(tuple.size() - 1);
        for (std::size_t i = 0; i < tuple.size(); ++i)
            if (i != omit) face.push_back(tuple[i]);
        out.add(OrientedSimplex::from_tuple(std::move(face)), face_sign);
    }
    return out;
}

inline SimplexChain boundary_chain(const SimplexChain& chain, int dim) {
    SimplexChain out;
    for (const auto& [key, coeff] : chain.terms()) {
        if (static_cast<int>(key.size()) != dim + 1) continue;
        const SimplexChain b = boundary_simplex(OrientedSimplex::from_tuple(key));
        for (const auto& [fk, fc] : b.terms()) out.add(OrientedSimplex::from_tuple(fk), fc * coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Embedded orientation

namespace detail {

/// Determinant by Gaussian elimination with partial pivoting. Rows are the
/// edge vectors of a simplex; sizes here never exceed the ambient dimension.
inline double determinant(std::vector<std::vector<double>> m) {
    const std::size_t k = m.size();
    double det = 1.0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (m[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

}  // namespace detail

/// Maps a vertex id to its coordinates.
using CoordsFn = std::vector<double> (*)(VertexId);

/// Orientation sign of an ordered point tuple spanning the full ambient
/// dimension: sign of det(p_1 - p_0, ..., p_k - p_0). Throws NotIndependent
/// when the points are affinely dependent.
inline int embedded_orientation_sign_points(const std::vector<std::vector<double>>& points) {
    const std::size_t k = points.size() - 1;
    if (points.empty() || points[0].size() != k)
        throw DimensionError("expected k+1 points of dimension k");
    std::vector<std::vector<double>> edges(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) edges[i][j] = points[i + 1][j] - points[0][j];
    const double det = detail::determinant(std::move(edges));
    if (det == 0.0) throw NotIndependent("degenerate simplex: zero determinant");
    return det > 0.0 ? +1 : -1;
}

}  // namespace cubedec
