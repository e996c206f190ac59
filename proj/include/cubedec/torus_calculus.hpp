#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "cubedec/chain.hpp"
#include "cubedec/cochain.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/torus.hpp"

namespace cubedec {

using VertexField = Cochain;
using EdgeField = Cochain;
using FaceField = Cochain;
using CellField = Cochain;

namespace detail {

inline std::array<int, 3> step(std::array<int, 3> x, int axis0, int by) {
    x[static_cast<std::size_t>(axis0)] += by;
    return x;
}

}  // namespace detail

template <class S>
S h_at(const TorusMesh& mesh, const BasicCochain<S>& h, const std::array<int, 3>& x) {
    return h.values[mesh.vertex_index(x)];
}

/// Value on the edge (x, x+e_dir); querying the reverse edge is a negation.
template <class S>
S j_at(const TorusMesh& mesh, const BasicCochain<S>& j, const std::array<int, 3>& x, int dir) {
    return j.values[mesh.edge_index(x, dir)];
}

template <class S>
S psi_at(const TorusMesh& mesh, const BasicCochain<S>& psi, const std::array<int, 3>& x, int K) {
    return psi.values[mesh.face_index(x, K)];
}

template <class S>
S rho_at(const TorusMesh& mesh, const BasicCochain<S>& rho, const std::array<int, 3>& x) {
    return rho.values[mesh.top_index(x)];
}

/// Forward difference along every edge: (grad h)(x, x+e_i) = h(x+e_i) - h(x).
template <class S>
BasicCochain<S> grad(const TorusMesh& mesh, const BasicCochain<S>& h) {
    if (h.dim != 0) throw DimensionError("grad expects a vertex field");
    BasicCochain<S> out(1, mesh.complex().cell_count(1));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const TorusCellKey& key = mesh.cell_key(1, i);
        int a = 0;
        while (!(key.axes & (1u << a))) ++a;
        out.values[i] = h_at(mesh, h, detail::step(key.x, a, +1)) - h_at(mesh, h, key.x);
    }
    return out;
}

/// Face circulation: on face K at x with cyclic axis pair (a, b),
/// (curl j)(f_K) = [j_b(x+e_a) - j_b(x)] - [j_a(x+e_b) - j_a(x)].
template <class S>
BasicCochain<S> curl(const TorusMesh& mesh, const BasicCochain<S>& j) {
    if (mesh.n() < 2) throw Unsupported("curl needs at least two dimensions");
    if (j.dim != 1) throw DimensionError("curl expects an edge field");
    BasicCochain<S> out(2, mesh.complex().cell_count(2));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const TorusCellKey& key = mesh.cell_key(2, i);
        const auto [a, b] = detail::face_cycle_axes(mesh.face_number(key.axes));
        const auto& x = key.x;
        out.values[i] = (j_at(mesh, j, detail::step(x, a, +1), b + 1) - j_at(mesh, j, x, b + 1)) -
                        (j_at(mesh, j, detail::step(x, b, +1), a + 1) - j_at(mesh, j, x, a + 1));
    }
    return out;
}

/// Net outward flux of a face field through each cell's six faces.
template <class S>
BasicCochain<S> div2(const TorusMesh& mesh, const BasicCochain<S>& psi) {
    if (mesh.n() != 3) throw Unsupported("div2 needs three dimensions");
    if (psi.dim != 2) throw DimensionError("div2 expects a face field");
    BasicCochain<S> out(3, mesh.complex().cell_count(3));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const auto& x = mesh.cell_key(3, i).x;
        S acc(0);
        for (int K = 1; K <= 3; ++K)
            acc += psi_at(mesh, psi, detail::step(x, K - 1, +1), K) - psi_at(mesh, psi, x, K);
        out.values[i] = acc;
    }
    return out;
}

/// Net outflow at each vertex: sum over i of j(x, x+e_i) - j(x-e_i, x); this
/// is minus the codifferential of j.
template <class S>
BasicCochain<S> div1(const TorusMesh& mesh, const BasicCochain<S>& j) {
    if (j.dim != 1) throw DimensionError("div1 expects an edge field");
    BasicCochain<S> out(0, mesh.complex().cell_count(0));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const auto& x = mesh.cell_key(0, i).x;
        S acc(0);
        for (int dir = 1; dir <= mesh.n(); ++dir)
            acc += j_at(mesh, j, x, dir) - j_at(mesh, j, detail::step(x, dir - 1, -1), dir);
        out.values[i] = acc;
    }
    return out;
}

/// Codifferential of a cell field by its backward-difference stencil:
/// on face K at x the value is rho(cell at x-e_K) - rho(cell at x).
template <class S>
BasicCochain<S> delta_cell_to_face(const TorusMesh& mesh, const BasicCochain<S>& rho) {
    if (mesh.n() != 3) throw Unsupported("delta_cell_to_face needs three dimensions");
    if (rho.dim != 3) throw DimensionError("expects a cell field");
    BasicCochain<S> out(2, mesh.complex().cell_count(2));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const TorusCellKey& key = mesh.cell_key(2, i);
        const int K = mesh.face_number(key.axes);
        out.values[i] =
            rho_at(mesh, rho, detail::step(key.x, K - 1, -1)) - rho_at(mesh, rho, key.x);
    }
    return out;
}

/// Codifferential of a face field by backward differences; in 2d this is the
/// orthogonal gradient (delta psi)(x, x+e_1), (x, x+e_2) = (D2 psi, -D1 psi).
template <class S>
BasicCochain<S> delta_face_to_edge(const TorusMesh& mesh, const BasicCochain<S>& psi) {
    if (mesh.n() < 2) throw Unsupported("delta_face_to_edge needs at least two dimensions");
    if (psi.dim != 2) throw DimensionError("expects a face field");
    BasicCochain<S> out(1, mesh.complex().cell_count(1));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const TorusCellKey& key = mesh.cell_key(1, i);
        int k0 = 0;
        while (!(key.axes & (1u << k0))) ++k0;
        const auto& x = key.x;
        if (mesh.n() == 2) {
            const S d1 = psi_at(mesh, psi, x, 3) - psi_at(mesh, psi, detail::step(x, 0, -1), 3);
            const S d2 = psi_at(mesh, psi, x, 3) - psi_at(mesh, psi, detail::step(x, 1, -1), 3);
            out.values[i] = (k0 == 0) ? d2 : S(0) - d1;
        } else {
            const auto [a, b] = detail::face_cycle_axes(k0 + 1);
            out.values[i] =
                (psi_at(mesh, psi, x, b + 1) - psi_at(mesh, psi, detail::step(x, a, -1), b + 1)) -
                (psi_at(mesh, psi, x, a + 1) - psi_at(mesh, psi, detail::step(x, b, -1), a + 1));
        }
    }
    return out;
}

/// Pairing of an edge field with a 1-chain: the discrete path integral.
template <class S>
S line_integral(const BasicCochain<S>& j, const Chain& gamma) {
    if (gamma.dim != 1) throw DimensionError("line integral expects a 1-chain");
    return pairing(j, gamma);
}

template <class S>
struct PotentialResult {
    bool exact = false;
    BasicCochain<S> potential{0, 0};  // h with grad h = j and h(basepoint) = 0
    Chain cycle{1};                   // first violating closed loop otherwise
    S circulation = S(0);
};

/// Integrates j along a breadth-first spanning tree, then verifies every
/// non-tree edge. Failure hands back the tree cycle of the first bad edge and
/// its circulation. tol widens the verification for inexact scalars.
template <class S>
PotentialResult<S> potential_from_gradient(const TorusMesh& mesh, const BasicCochain<S>& j,
                                           const std::array<int, 3>& basepoint, S tol = S(0)) {
    if (j.dim != 1) throw DimensionError("expects an edge field");
    const std::size_t nv = mesh.complex().cell_count(0);
    std::vector<S> h(nv, S(0));
    std::vector<char> seen(nv, 0);
    struct TreeStep {
        std::size_t parent = 0;
        std::size_t edge = 0;
        int sign = 0;  // +1 when the stored edge runs parent -> child
    };
    std::vector<TreeStep> tree(nv);

    const std::size_t root = mesh.vertex_index(basepoint);
    std::deque<std::size_t> queue{root};
    seen[root] = 1;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        const auto x = mesh.cell_key(0, v).x;
        for (int dir = 1; dir <= mesh.n(); ++dir) {
            for (int fwd : {+1, -1}) {
                const auto y = detail::step(x, dir - 1, fwd);
                const std::size_t w = mesh.vertex_index(y);
                if (seen[w]) continue;
                const std::size_t e =
                    (fwd > 0) ? mesh.edge_index(x, dir) : mesh.edge_index(y, dir);
                seen[w] = 1;
                h[w] = h[v] + S(fwd) * j.values[e];
                tree[w] = TreeStep{v, e, fwd};
                queue.push_back(w);
            }
        }
    }

    auto to_root = [&](std::size_t v) {
        Chain path(1);
        while (v != root) {
            // walking child -> parent traverses the stored edge against fwd
            path.add_term(tree[v].edge, -tree[v].sign);
            v = tree[v].parent;
        }
        return path;
    };

    const std::size_t ne = mesh.complex().cell_count(1);
    for (std::size_t e = 0; e < ne; ++e) {
        const TorusCellKey& key = mesh.cell_key(1, e);
        int a = 0;
        while (!(key.axes & (1u << a))) ++a;
        const std::size_t u = mesh.vertex_index(key.x);
        const std::size_t w = mesh.vertex_index(detail::step(key.x, a, +1));
        const S diff = j.values[e] - (h[w] - h[u]);
        const S mag = diff < S(0) ? S(0) - diff : diff;
        if (mag > tol) {
            PotentialResult<S> bad;
            bad.exact = false;
            Chain cycle(1);
            cycle.add_term(e, +1);
            cycle = chain_add(cycle, to_root(w));
            cycle = chain_add(cycle, chain_negate(to_root(u)));
            bad.cycle = cycle;
            bad.circulation = pairing(j, cycle);
            return bad;
        }
    }

    PotentialResult<S> ok;
    ok.exact = true;
    ok.potential = BasicCochain<S>(0, nv);
    ok.potential.values = std::move(h);
    return ok;
}

template <class S>
struct TheoremCheck {
    S lhs = S(0);
    S rhs = S(0);
    bool equal = false;
    bool same_sign = false;  // false flags a mixed-sign collection: the
                             // boundary-cancellation reading does not apply
};

namespace detail {

inline bool uniform_sign(const Chain& c) {
    bool pos = false, neg = false;
    for (const auto& [idx, coeff] : c.coeffs) (coeff > 0 ? pos : neg) = true;
    return !(pos && neg);
}

}  // namespace detail

/// Total curl over a face collection against the line integral around its
/// boundary chain; the two sides go through independent code paths.
template <class S>
TheoremCheck<S> stokes_check(const TorusMesh& mesh, const BasicCochain<S>& j,
                             const Chain& faces) {
    if (mesh.n() < 2) throw Unsupported("needs at least two dimensions");
    if (faces.dim != 2) throw DimensionError("expects a 2-chain");
    const BasicCochain<S> c = curl(mesh, j);
    TheoremCheck<S> out;
    for (const auto& [idx, coeff] : faces.coeffs) out.lhs += S(coeff) * c.values[idx];
    out.rhs = pairing(j, mesh.complex().boundary(faces));
    out.equal = out.lhs == out.rhs;
    out.same_sign = detail::uniform_sign(faces);
    return out;
}

/// Total divergence over a cell collection against the flux through its
/// boundary faces.
template <class S>
TheoremCheck<S> divergence_theorem_check(const TorusMesh& mesh, const BasicCochain<S>& psi,
                                         const Chain& cells) {
    if (mesh.n() != 3) throw Unsupported("needs three dimensions");
    if (cells.dim != 3) throw DimensionError("expects a 3-chain");
    const BasicCochain<S> dv = div2(mesh, psi);
    TheoremCheck<S> out;
    for (const auto& [idx, coeff] : cells.coeffs) out.lhs += S(coeff) * dv.values[idx];
    out.rhs = pairing(psi, mesh.complex().boundary(cells));
    out.equal = out.lhs == out.rhs;
    out.same_sign = detail::uniform_sign(cells);
    return out;
}

}  // namespace cubedec
