#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <vector>

#include "cubedec/cochain.hpp"
#include "cubedec/complex.hpp"
#include "cubedec/errors.hpp"

namespace cubedec {

using IntMatrix = Eigen::SparseMatrix<std::int64_t>;
using RealMatrix = Eigen::SparseMatrix<double>;

/// Signed incidence matrix of the boundary operator: rows are (k-1)-cells,
/// columns are k-cells, entries in {-1, 0, +1}.
inline IntMatrix assemble_boundary(const CubicComplex& C, int k) {
    if (k < 1 || k > C.dim()) throw InvalidDimension("boundary degree out of range");
    std::vector<Eigen::Triplet<std::int64_t>> entries;
    for (std::size_t i = 0; i < C.cell_count(k); ++i)
        for (const auto& [face, sign] : C.incidence(k, i))
            entries.emplace_back(static_cast<int>(face), static_cast<int>(i), sign);
    IntMatrix m(static_cast<int>(C.cell_count(k - 1)), static_cast<int>(C.cell_count(k)));
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

/// Signed permutation data for the duality map on a self-dual complex: cell i
/// of dimension k maps to dual cell star_index[k][i] of dimension n-k with
/// sign star_sign[k][i]. The dual complex shares this complex's combinatorial
/// structure; dd_translate identifies double-dual cells with primal ones.
struct StarData {
    std::vector<std::vector<std::size_t>> index;
    std::vector<std::vector<int>> sign;
    std::vector<std::vector<std::size_t>> dd_translate;
};

/// Boundary, coboundary and the (identity) inner product for one complex.
/// d^k is the transpose of the boundary in degree k+1, and since the inner
/// product weights are 1 the codifferential is a plain transpose of d.
struct OperatorBundle {
    const CubicComplex* complex = nullptr;
    std::vector<IntMatrix> boundary;  // boundary[k], valid for 1 <= k <= n
    std::vector<IntMatrix> d;         // d[k] = boundary[k+1]^T, 0 <= k < n
    std::vector<IntMatrix> metric;    // inner product per degree; identity for now,
                                      // recorded so delta = transpose stays auditable
    std::optional<StarData> star;

    int dim() const { return complex->dim(); }
};

inline OperatorBundle assemble_operators(const CubicComplex& C) {
    OperatorBundle b;
    b.complex = &C;
    const int n = C.dim();
    b.boundary.resize(n + 1);
    b.d.resize(n);
    for (int k = 1; k <= n; ++k) {
        b.boundary[k] = assemble_boundary(C, k);
        b.d[k - 1] = IntMatrix(b.boundary[k].transpose());
        b.d[k - 1].makeCompressed();
    }
    b.metric.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        const int mk = static_cast<int>(C.cell_count(k));
        b.metric[k] = IntMatrix(mk, mk);
        b.metric[k].setIdentity();
    }
    return b;
}

namespace detail {

/// Column-major sparse mat-vec with a fixed accumulation order, valid for any
/// scalar.
template <class Scalar>
std::vector<Scalar> sparse_apply(const IntMatrix& m, const std::vector<Scalar>& x) {
    if (static_cast<std::size_t>(m.cols()) != x.size())
        throw DimensionError("operator and cochain sizes differ");
    std::vector<Scalar> y(static_cast<std::size_t>(m.rows()), Scalar(0));
    for (int col = 0; col < m.outerSize(); ++col)
        for (IntMatrix::InnerIterator it(m, col); it; ++it)
            y[static_cast<std::size_t>(it.row())] += Scalar(it.value()) * x[col];
    return y;
}

}  // namespace detail

/// (d omega)(c) = omega(boundary c). Top degree maps to the empty cochain.
template <class Scalar>
BasicCochain<Scalar> apply_d(const BasicCochain<Scalar>& omega, const OperatorBundle& bundle) {
    const int k = omega.dim;
    if (k < 0 || k > bundle.dim()) throw InvalidDimension("form degree out of range");
    BasicCochain<Scalar> out(k + 1, 0);
    if (k == bundle.dim()) return out;
    out.values = detail::sparse_apply(bundle.d[k], omega.values);
    return out;
}

/// Adjoint of d under the identity inner product: the transpose application.
/// Degree 0 collapses to the empty cochain.
template <class Scalar>
BasicCochain<Scalar> apply_delta(const BasicCochain<Scalar>& omega, const OperatorBundle& bundle) {
    const int k = omega.dim;
    if (k < 0 || k > bundle.dim()) throw InvalidDimension("form degree out of range");
    if (k == 0) return BasicCochain<Scalar>(0, 0);
    // delta^k = (d^{k-1})^T = boundary_k, applied without re-transposing.
    const IntMatrix& dk = bundle.d[k - 1];
    if (static_cast<std::size_t>(dk.rows()) != omega.values.size())
        throw DimensionError("operator and cochain sizes differ");
    BasicCochain<Scalar> out(k - 1, static_cast<std::size_t>(dk.cols()));
    for (int col = 0; col < dk.outerSize(); ++col) {
        Scalar acc(0);
        for (IntMatrix::InnerIterator it(dk, col); it; ++it)
            acc += Scalar(it.value()) * omega.values[static_cast<std::size_t>(it.row())];
        out.values[static_cast<std::size_t>(col)] = acc;
    }
    return out;
}

/// delta_{k+1} d_k: the coexact-probing half of the Laplacian. Zero in the
/// top degree.
inline IntMatrix laplacian_up(const OperatorBundle& bundle, int k) {
    const int n = bundle.dim();
    if (k < 0 || k > n) throw InvalidDimension("form degree out of range");
    const int mk = static_cast<int>(bundle.complex->cell_count(k));
    if (k == n) return IntMatrix(mk, mk);
    IntMatrix up = IntMatrix(bundle.d[k].transpose()) * bundle.d[k];
    up.makeCompressed();
    return up;
}

/// d_{k-1} delta_k: the exact-probing half. Zero in degree 0.
inline IntMatrix laplacian_down(const OperatorBundle& bundle, int k) {
    const int n = bundle.dim();
    if (k < 0 || k > n) throw InvalidDimension("form degree out of range");
    const int mk = static_cast<int>(bundle.complex->cell_count(k));
    if (k == 0) return IntMatrix(mk, mk);
    IntMatrix down = bundle.d[k - 1] * IntMatrix(bundle.d[k - 1].transpose());
    down.makeCompressed();
    return down;
}

/// L_k = delta_{k+1} d_k + d_{k-1} delta_k as an exact integer matrix.
inline IntMatrix laplacian(const OperatorBundle& bundle, int k) {
    IntMatrix L = laplacian_up(bundle, k) + laplacian_down(bundle, k);
    L.makeCompressed();
    return L;
}

inline RealMatrix to_real(const IntMatrix& m) {
    return m.cast<double>();
}

/// Value of a cochain on an arbitrarily oriented cell: the basis coefficient
/// times the queried cell's sign against the stored one.
template <class Scalar>
Scalar value_on(const CubicComplex& C, const BasicCochain<Scalar>& omega,
                const OrientedCube& cell) {
    if (omega.dim != cell.dim()) throw DimensionError("form and cell degrees differ");
    const auto [index, sign] = C.locate(cell);
    return Scalar(sign) * omega.values[index];
}

/// Transports a k-form to the dual complex: the value on the dual of c equals
/// the value on c, with the duality map's sign.
template <class Scalar>
BasicCochain<Scalar> hodge_star(const BasicCochain<Scalar>& omega, const OperatorBundle& bundle) {
    if (!bundle.star) throw NoDual("operator bundle has no duality map");
    const int k = omega.dim;
    const int n = bundle.dim();
    if (k < 0 || k > n) throw InvalidDimension("form degree out of range");
    const auto& index = bundle.star->index[k];
    const auto& sign = bundle.star->sign[k];
    if (omega.values.size() != index.size()) throw DimensionError("cochain size mismatch");
    BasicCochain<Scalar> out(n - k, bundle.complex->cell_count(n - k));
    for (std::size_t i = 0; i < index.size(); ++i)
        out.values[index[i]] = Scalar(sign[i]) * omega.values[i];
    return out;
}

/// Star from the dual complex back to the primal one: the same signed
/// permutation composed with the double-dual identification.
template <class Scalar>
BasicCochain<Scalar> hodge_star_from_dual(const BasicCochain<Scalar>& eta,
                                          const OperatorBundle& bundle) {
    if (!bundle.star) throw NoDual("operator bundle has no duality map");
    const int j = eta.dim;
    const int n = bundle.dim();
    if (j < 0 || j > n) throw InvalidDimension("form degree out of range");
    const auto& index = bundle.star->index[j];
    const auto& sign = bundle.star->sign[j];
    const auto& translate = bundle.star->dd_translate[n - j];
    if (eta.values.size() != index.size()) throw DimensionError("cochain size mismatch");
    BasicCochain<Scalar> out(n - j, bundle.complex->cell_count(n - j));
    for (std::size_t i = 0; i < index.size(); ++i)
        out.values[translate[index[i]]] = Scalar(sign[i]) * eta.values[i];
    return out;
}

/// delta computed through the duality route instead of the transpose:
/// delta omega = (-1)^{nk+1} star d star omega for a (k+1)-form.
template <class Scalar>
BasicCochain<Scalar> delta_via_star(const BasicCochain<Scalar>& omega,
                                    const OperatorBundle& bundle) {
    const int n = bundle.dim();
    const int k = omega.dim - 1;
    if (omega.dim < 1 || omega.dim > n) throw InvalidDimension("form degree out of range");
    auto starred = hodge_star(omega, bundle);
    auto dstarred = apply_d(starred, bundle);
    auto back = hodge_star_from_dual(dstarred, bundle);
    const int s = ((n * k + 1) % 2 == 0) ? +1 : -1;
    return cochain_scale(back, Scalar(s));
}

/// FNV-1a hash of a dimension's basis tuples; exported operator files carry it
/// so consumers can detect ordering drift.
inline std::uint64_t basis_hash(const CubicComplex& C, int k) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xffull;
            h *= 1099511628211ull;
        }
    };
    for (const auto& c : C.cells(k)) {
        for (VertexId v : c.sorted_vertices()) mix(static_cast<std::uint64_t>(v));
        mix(0xabull);
    }
    return h;
}

}  // namespace cubedec
