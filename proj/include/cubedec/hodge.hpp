#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "cubedec/cochain.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/operators.hpp"
#include "cubedec/torus.hpp"

namespace cubedec {

/// Relative residual target for the decomposition solves. The iteration cap
/// is ten times the system size.
constexpr double kSolveTolerance = 1e-12;

/// Singular values below this fraction of the largest count as kernel.
constexpr double kKernelCut = 1e-9;

/// Orthogonal splitting of a k-form into an image-of-d part, an
/// image-of-delta part, and a remainder annihilated by both.
struct HodgeSplit {
    Cochain exact;
    Cochain coexact;
    Cochain harmonic;
    double residual_norm = 0.0;          ///< worst relative residual over the solves
    std::int64_t solver_iterations = 0;  ///< total over the solves
};

namespace detail {

struct CgOutcome {
    Eigen::VectorXd x;
    double residual = 0.0;  ///< absolute final residual norm
    std::int64_t iterations = 0;
};

/// Conjugate gradient for a symmetric positive semidefinite system whose
/// right hand side lies in the operator's range. Starting from zero keeps
/// every iterate in the range, so the limit is the minimal-norm solution.
/// The target is absolute: right hand sides already below it solve as zero
/// instead of chasing a relative reduction into the rounding floor.
/// `remove_mean` projects away a known constant kernel on top of that.
inline CgOutcome cg_solve(const RealMatrix& A, Eigen::VectorXd b, double abs_target,
                          std::int64_t cap, bool remove_mean) {
    if (remove_mean && b.size() > 0) b.array() -= b.mean();
    CgOutcome out;
    out.x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    while (std::sqrt(rr) > abs_target) {
        if (out.iterations >= cap)
            throw SolverError("conjugate gradient hit the iteration cap", std::sqrt(rr));
        const Eigen::VectorXd Ap = A * p;
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0))
            throw SolverError("conjugate gradient lost positivity", std::sqrt(rr));
        const double alpha = rr / pAp;
        out.x += alpha * p;
        r -= alpha * Ap;
        const double rr_next = r.squaredNorm();
        p = r + (rr_next / rr) * p;
        rr = rr_next;
        ++out.iterations;
    }
    if (remove_mean && out.x.size() > 0) out.x.array() -= out.x.mean();
    out.residual = std::sqrt(rr);
    return out;
}

inline Eigen::VectorXd to_vector(const Cochain& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.values.size()));
    for (std::size_t i = 0; i < a.values.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = a.values[i];
    return v;
}

inline Cochain from_vector(int dim, const Eigen::VectorXd& v) {
    Cochain out(dim, static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out.values[static_cast<std::size_t>(i)] = v[i];
    return out;
}

}  // namespace detail

/// Splits omega = d(alpha) + delta(beta) + harmonic. alpha solves the
/// consistent normal equations (delta d) alpha = delta omega one degree down,
/// beta solves (d delta) beta = d omega one degree up, and the harmonic part
/// is the leftover. Only d(alpha) and delta(beta) are meaningful; the
/// potentials themselves are gauge-fixed to minimal norm by the solver.
inline HodgeSplit decompose(const Cochain& omega, const OperatorBundle& bundle) {
    const int k = omega.dim;
    const int n = bundle.dim();
    if (k < 0 || k > n) throw InvalidDimension("form degree out of range");
    if (omega.values.size() != bundle.complex->cell_count(k))
        throw DimensionError("cochain length does not match the complex");

    HodgeSplit split;
    split.exact = Cochain(k, omega.values.size());
    split.coexact = Cochain(k, omega.values.size());

    // solve targets and the reported residual are both relative to the input
    const double scale = norm(omega);
    if (scale == 0.0) {
        split.harmonic = Cochain(k, omega.values.size());
        return split;
    }
    if (k >= 1) {
        const Cochain rhs = apply_delta(omega, bundle);
        const RealMatrix up = to_real(laplacian_up(bundle, k - 1));
        const std::int64_t cap = 10 * static_cast<std::int64_t>(rhs.values.size());
        auto sol = detail::cg_solve(up, detail::to_vector(rhs), kSolveTolerance * scale, cap,
                                    k - 1 == 0);
        split.exact = apply_d(detail::from_vector(k - 1, sol.x), bundle);
        split.residual_norm = std::max(split.residual_norm, sol.residual / scale);
        split.solver_iterations += sol.iterations;
    }
    if (k <= n - 1) {
        const Cochain rhs = apply_d(omega, bundle);
        const RealMatrix down = to_real(laplacian_down(bundle, k + 1));
        const std::int64_t cap = 10 * static_cast<std::int64_t>(rhs.values.size());
        auto sol =
            detail::cg_solve(down, detail::to_vector(rhs), kSolveTolerance * scale, cap, false);
        split.coexact = apply_delta(detail::from_vector(k + 1, sol.x), bundle);
        split.residual_norm = std::max(split.residual_norm, sol.residual / scale);
        split.solver_iterations += sol.iterations;
    }
    split.harmonic = cochain_sub(cochain_sub(omega, split.exact), split.coexact);
    return split;
}

/// The n unit coordinate edge fields: field i is 1 on every edge along axis i
/// and 0 elsewhere. Each is closed and coclosed exactly, and on T^n_N the
/// fields have disjoint supports of N^n unit entries each.
inline std::vector<IntCochain> harmonic_basis_1forms(const TorusMesh& mesh) {
    std::vector<IntCochain> fields;
    for (int i = 1; i <= mesh.n(); ++i) {
        IntCochain phi(1, mesh.complex().cell_count(1));
        for (std::size_t e = 0; e < phi.values.size(); ++e)
            if (mesh.cell_key(1, e).axes == (1u << (i - 1))) phi.values[e] = 1;
        fields.push_back(std::move(phi));
    }
    return fields;
}

/// How a numeric kernel rank was decided: the absolute cutoff applied to the
/// singular values and the ratio of smallest kept to largest dropped
/// (infinite when the cut is clean or one side is empty).
struct KernelRank {
    std::size_t dimension = 0;
    double threshold = 0.0;
    double gap = std::numeric_limits<double>::infinity();
};

/// Kernel rank of a square operator by dense singular value decomposition.
inline KernelRank kernel_rank(const IntMatrix& A) {
    KernelRank out;
    if (A.rows() == 0) return out;
    const Eigen::MatrixXd dense = Eigen::MatrixXd(to_real(A));
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double top = sv[0];
    if (top == 0.0) {
        out.dimension = static_cast<std::size_t>(A.rows());
        return out;
    }
    out.threshold = kKernelCut * top;
    double smallest_kept = 0.0;
    double largest_dropped = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] < out.threshold) {
            out.dimension += 1;
            largest_dropped = std::max(largest_dropped, sv[i]);
        } else {
            smallest_kept = sv[i];  // values arrive in decreasing order
        }
    }
    if (largest_dropped > 0.0) out.gap = smallest_kept / largest_dropped;
    return out;
}

/// Dimension of the degree-k harmonic space: the numeric kernel rank of L_k.
inline std::size_t harmonic_dimension(const OperatorBundle& bundle, int k,
                                      KernelRank* details = nullptr) {
    const KernelRank rank = kernel_rank(laplacian(bundle, k));
    if (details != nullptr) *details = rank;
    return rank.dimension;
}

}  // namespace cubedec
