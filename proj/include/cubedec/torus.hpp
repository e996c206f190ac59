#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "cubedec/complex.hpp"
#include "cubedec/cube.hpp"
#include "cubedec/dual.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/operators.hpp"

namespace cubedec {

/// Position and spanned-axis set of a structured torus cell. Axis bit i
/// stands for the unit step e_{i+1}; a k-cell spans k axes.
struct TorusCellKey {
    std::array<int, 3> x{0, 0, 0};
    unsigned axes = 0;
};

namespace detail {

/// Cyclic successor pair of face number K in {1,2,3}: the two axes the face
/// spans, in the order its vertex cycle walks them (0-based).
inline std::pair<int, int> face_cycle_axes(int K) {
    return {K % 3, (K + 1) % 3};
}

}  // namespace detail

/// Unit-grid torus Z^n / N Z^n as a cubic complex, n in {1,2,3}. Cells carry
/// the fixed sign conventions: edges run (x, x+e_i), face K at x walks the
/// cycle (x, x+e_a, x+e_a+e_b, x+e_b) for (a,b) the cyclic pair of K, and
/// 3-cells are right-handed. The duality map onto the half-step translate is
/// precomputed as a signed index permutation.
class TorusMesh {
public:
    int n() const { return n_; }
    int side() const { return N_; }
    const CubicComplex& complex() const { return complex_; }

    int wrap(int c) const {
        const int r = c % N_;
        return r < 0 ? r + N_ : r;
    }

    VertexId vertex_id(const std::array<int, 3>& x) const {
        VertexId id = 0;
        for (int a = n_ - 1; a >= 0; --a) id = id * N_ + wrap(x[a]);
        return id;
    }

    std::array<int, 3> vertex_coords(VertexId id) const {
        std::array<int, 3> x{0, 0, 0};
        for (int a = 0; a < n_; ++a) {
            x[a] = static_cast<int>(id % N_);
            id /= N_;
        }
        return x;
    }

    /// Axis sets of size k in ascending mask order; this fixes the meaning of
    /// the "type" slot of a cell key.
    const std::vector<unsigned>& axis_sets(int k) const { return subsets_.at(k); }

    std::size_t cell_index(int k, const std::array<int, 3>& x, unsigned axes) const {
        const auto& pos = subset_pos_.at(k);
        auto it = pos.find(axes);
        if (it == pos.end()) throw InvalidDimension("axis set does not match cell dimension");
        return from_key_[k][it->second][vertex_id(x)];
    }

    const TorusCellKey& cell_key(int k, std::size_t index) const { return keys_.at(k).at(index); }

    std::size_t vertex_index(const std::array<int, 3>& x) const { return cell_index(0, x, 0u); }

    /// Edge (x, x+e_dir), dir in 1..n.
    std::size_t edge_index(const std::array<int, 3>& x, int dir) const {
        if (dir < 1 || dir > n_) throw InvalidDimension("edge direction out of range");
        return cell_index(1, x, 1u << (dir - 1));
    }

    /// Face number K: in 3d K in {1,2,3} spans the two axes other than K; the
    /// 2d complex has the single face type K = 3.
    std::size_t face_index(const std::array<int, 3>& x, int K) const {
        if (n_ < 2) throw InvalidDimension("no faces in one dimension");
        if (n_ == 2) {
            if (K != 3) throw InvalidDimension("2d faces use face number 3");
            return cell_index(2, x, 0b11u);
        }
        if (K < 1 || K > 3) throw InvalidDimension("face number out of range");
        return cell_index(2, x, 0b111u ^ (1u << (K - 1)));
    }

    std::size_t top_index(const std::array<int, 3>& x) const {
        return cell_index(n_, x, (1u << n_) - 1u);
    }

    /// Face number of a 2-cell key (3d only; 2d is always 3).
    int face_number(unsigned axes) const {
        if (n_ == 2) return 3;
        for (int K = 1; K <= 3; ++K)
            if (axes == (0b111u ^ (1u << (K - 1)))) return K;
        throw InvalidDimension("axis set is not a face type");
    }

    /// Chart covering the closed star of cell (k, index): coordinate offsets
    /// from the cell's position are lifted to the symmetric range, so wrap
    /// never folds the star onto itself (needs N >= 3).
    ChartFn star_chart(int k, std::size_t index) const {
        const TorusCellKey key = cell_key(k, index);
        const int n = n_, N = N_;
        auto coords = [this](VertexId v) { return vertex_coords(v); };
        return [key, n, N, coords](VertexId v) {
            const auto xv = coords(v);
            std::vector<double> p(static_cast<std::size_t>(n));
            for (int a = 0; a < n; ++a) {
                int d = (xv[a] - key.x[a]) % N;
                if (d < 0) d += N;
                if (d > N / 2) d -= N;
                p[static_cast<std::size_t>(a)] = key.x[a] + d;
            }
            return p;
        };
    }

    /// Index of the dual cell of (k, i) in the half-step translate, reusing
    /// primal keys: the dual of (x, A) sits at (x - sum of e_j, j not in A)
    /// and spans the complementary axes.
    std::size_t dual_index(int k, std::size_t i) const {
        const TorusCellKey& key = cell_key(k, i);
        std::array<int, 3> z = key.x;
        const unsigned full = (1u << n_) - 1u;
        for (int a = 0; a < n_; ++a)
            if (!(key.axes & (1u << a))) z[a] = wrap(z[a] - 1);
        return cell_index(n_ - k, z, full ^ key.axes);
    }

    /// Orientation sign of the duality map for cells of the given key type;
    /// shared by every position by translation invariance.
    int dual_sign(int k, unsigned axes) const {
        return star_sign_.at(k).at(subset_pos_.at(k).at(axes));
    }

    /// Double-dual cells live on the full-step translate; this maps their
    /// indices back to primal ones: (z, A) there is (z + (1,..,1), A) here.
    std::size_t translate_index(int k, std::size_t i) const {
        const TorusCellKey& key = cell_key(k, i);
        std::array<int, 3> z = key.x;
        for (int a = 0; a < n_; ++a) z[a] = wrap(z[a] + 1);
        return cell_index(k, z, key.axes);
    }

    StarData star() const {
        StarData s;
        s.index.resize(n_ + 1);
        s.sign.resize(n_ + 1);
        s.dd_translate.resize(n_ + 1);
        for (int k = 0; k <= n_; ++k) {
            const std::size_t count = complex_.cell_count(k);
            s.index[k].resize(count);
            s.sign[k].resize(count);
            s.dd_translate[k].resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                s.index[k][i] = dual_index(k, i);
                s.sign[k][i] = dual_sign(k, keys_[k][i].axes);
                s.dd_translate[k][i] = translate_index(k, i);
            }
        }
        return s;
    }

    friend TorusMesh build_torus(int n, int N);

private:
    OrientedCube make_vertex(const std::array<int, 3>& x) const {
        return OrientedCube::from_corner_order({vertex_id(x)}, +1);
    }

    OrientedCube make_edge(const std::array<int, 3>& x, int axis0) const {
        auto y = x;
        y[axis0] += 1;
        return OrientedCube::from_corner_order({vertex_id(x), vertex_id(y)}, +1);
    }

    OrientedCube make_face(const std::array<int, 3>& x, int K) const {
        const auto [a, b] = detail::face_cycle_axes(K);
        auto xa = x, xab = x, xb = x;
        xa[a] += 1;
        xab[a] += 1;
        xab[b] += 1;
        xb[b] += 1;
        return OrientedCube::square_from_cycle(vertex_id(x), vertex_id(xa), vertex_id(xab),
                                               vertex_id(xb), +1);
    }

    OrientedCube make_top3(const std::array<int, 3>& x) const {
        std::vector<VertexId> corners;
        for (unsigned code = 0; code < 8u; ++code) {
            auto y = x;
            for (int a = 0; a < 3; ++a)
                if (code & (1u << a)) y[a] += 1;
            corners.push_back(vertex_id(y));
        }
        return OrientedCube::from_corner_order(corners, +1);
    }

    /// The fixed listing for a cell type, rebuilt on synthetic points for
    /// the structural half-step dual; base is the low corner, axes the 0-based
    /// spanned set in ascending order.
    OrientedCube make_cell_for(int m, unsigned axes, const std::array<int, 3>& x) const {
        std::vector<int> span;
        for (int a = 0; a < n_; ++a)
            if (axes & (1u << a)) span.push_back(a);
        if (m == 0) return make_vertex(x);
        if (m == 1) return make_edge(x, span[0]);
        if (m == 2) {
            if (n_ == 2) return make_face(x, 3);
            for (int K = 1; K <= 3; ++K)
                if (axes == (0b111u ^ (1u << (K - 1)))) return make_face(x, K);
        }
        return make_top3(x);
    }

    int n_ = 0;
    int N_ = 0;
    CubicComplex complex_;
    std::vector<std::vector<TorusCellKey>> keys_;                  // [k][index]
    std::vector<std::vector<std::vector<std::size_t>>> from_key_;  // [k][type][xid]
    std::vector<std::vector<unsigned>> subsets_;                   // [k] masks, ascending
    std::vector<std::map<unsigned, int>> subset_pos_;
    std::vector<std::vector<int>> star_sign_;  // [k][type]
};

namespace detail {

/// Geometric corner points of the structural dual cube of type (m, axes) with
/// low corner at p, listed with the same conventions as primal cells.
inline std::vector<std::vector<double>> ideal_cell_points(int n, int m, unsigned axes,
                                                          const std::vector<double>& p) {
    std::vector<int> span;
    for (int a = 0; a < n; ++a)
        if (axes & (1u << a)) span.push_back(a);
    auto shifted = [&](std::initializer_list<int> steps) {
        std::vector<double> q = p;
        for (int a : steps) q[static_cast<std::size_t>(a)] += 1.0;
        return q;
    };
    std::vector<std::vector<double>> pts;
    if (m == 0) {
        pts.push_back(p);
    } else if (m == 1) {
        pts.push_back(p);
        pts.push_back(shifted({span[0]}));
    } else if (m == 2) {
        int a, b;
        if (n == 2) {
            std::tie(a, b) = face_cycle_axes(3);
        } else {
            int K = 0;
            for (int c = 1; c <= 3; ++c)
                if (axes == (0b111u ^ (1u << (c - 1)))) K = c;
            std::tie(a, b) = face_cycle_axes(K);
        }
        // cycle order (p, p+a, p+a+b, p+b) stored as corner codes (0,1,3,2)
        pts.push_back(p);
        pts.push_back(shifted({a}));
        pts.push_back(shifted({b}));
        pts.push_back(shifted({a, b}));
    } else {
        for (unsigned code = 0; code < 8u; ++code) {
            std::vector<int> steps;
            for (int a = 0; a < 3; ++a)
                if (code & (1u << a)) steps.push_back(a);
            std::vector<double> q = p;
            for (int a : steps) q[static_cast<std::size_t>(a)] += 1.0;
            pts.push_back(q);
        }
    }
    return pts;
}

/// Orientation listing of the structural cell over its corner points: build
/// the cell on synthetic ids in corner-code order and decode its first
/// decomposition simplex back to points.
inline std::vector<std::vector<double>> ideal_positive_listing(
    int m, const std::vector<std::vector<double>>& corner_points) {
    std::vector<VertexId> ids(corner_points.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<VertexId>(i);
    OrientedCube c = (m == 2) ? OrientedCube::square_from_cycle(0, 1, 3, 2, +1)
                              : OrientedCube::from_corner_order(ids, +1);
    const OrientedSimplex rep = simplicial_decomposition(c).front();
    std::vector<std::vector<double>> pts;
    for (VertexId v : rep.oriented_tuple()) pts.push_back(corner_points[v]);
    return pts;
}

}  // namespace detail

inline TorusMesh build_torus(int n, int N) {
    if (n < 1 || n > 3) throw Unsupported("torus dimension must be 1, 2 or 3");
    if (N < 3) throw TooSmall("torus side must be at least 3");
    TorusMesh mesh;
    mesh.n_ = n;
    mesh.N_ = N;

    mesh.subsets_.resize(n + 1);
    mesh.subset_pos_.resize(n + 1);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const int k = detail::popcount(mask);
        mesh.subset_pos_[k][mask] = static_cast<int>(mesh.subsets_[k].size());
        mesh.subsets_[k].push_back(mask);
    }

    std::size_t points = 1;
    for (int a = 0; a < n; ++a) points *= static_cast<std::size_t>(N);

    auto coords_of_id = [&](std::size_t id) {
        std::array<int, 3> x{0, 0, 0};
        for (int a = 0; a < n; ++a) {
            x[a] = static_cast<int>(id % N);
            id /= static_cast<std::size_t>(N);
        }
        return x;
    };

    std::vector<OrientedCube> cells;
    for (int k = 0; k <= n; ++k)
        for (unsigned mask : mesh.subsets_[k])
            for (std::size_t id = 0; id < points; ++id)
                cells.push_back(mesh.make_cell_for(k, mask, coords_of_id(id)));
    mesh.complex_ = CubicComplex::from_cells(n, cells, /*close_under_faces=*/false);

    mesh.keys_.resize(n + 1);
    mesh.from_key_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        mesh.keys_[k].resize(mesh.complex_.cell_count(k));
        mesh.from_key_[k].assign(mesh.subsets_[k].size(),
                                 std::vector<std::size_t>(points, 0));
        for (std::size_t t = 0; t < mesh.subsets_[k].size(); ++t) {
            for (std::size_t id = 0; id < points; ++id) {
                const auto x = coords_of_id(id);
                const auto [idx, sign] =
                    mesh.complex_.locate(mesh.make_cell_for(k, mesh.subsets_[k][t], x));
                if (sign != +1) throw InvalidCube("stored torus cell disagrees with its maker");
                mesh.from_key_[k][t][id] = idx;
                mesh.keys_[k][idx] = TorusCellKey{x, mesh.subsets_[k][t]};
            }
        }
    }

    // Duality-map signs, one per cell type: compare the barycentric dual of a
    // representative cell against the structural half-step dual in its star
    // chart. Every piece must agree or the conventions are inconsistent.
    const unsigned full = (1u << n) - 1u;
    mesh.star_sign_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        mesh.star_sign_[k].assign(mesh.subsets_[k].size(), 0);
        for (std::size_t t = 0; t < mesh.subsets_[k].size(); ++t) {
            const unsigned A = mesh.subsets_[k][t];
            const std::array<int, 3> x0{0, 0, 0};
            const std::size_t i = mesh.cell_index(k, x0, A);
            const ChartFn chart = mesh.star_chart(k, i);
            const DualCell dc = dual_cell(mesh.complex_, k, i, chart);
            const int m = n - k;

            std::vector<double> p(static_cast<std::size_t>(n));
            for (int a = 0; a < n; ++a)
                p[static_cast<std::size_t>(a)] = (A & (1u << a)) ? 0.5 : -0.5;

            int s = 0;
            if (m == 0) {
                s = dc.pieces.front().sign;
            } else {
                const auto corner_pts = detail::ideal_cell_points(n, m, full ^ A, p);
                const auto tau = detail::ideal_positive_listing(m, corner_pts);
                for (const auto& piece : dc.pieces) {
                    const int rel =
                        piece.sign * detail::span_pairing_sign(piece.barycenters, tau);
                    if (s == 0) s = rel;
                    if (rel != s) throw InvalidCube("dual pieces disagree on orientation");
                }
            }
            mesh.star_sign_[k][t] = s;
        }
    }
    return mesh;
}

/// Assembled matrices plus the duality map. The bundle borrows the mesh's
/// complex; keep the mesh alive while using it.
inline OperatorBundle torus_operators(const TorusMesh& mesh) {
    OperatorBundle b = assemble_operators(mesh.complex());
    b.star = mesh.star();
    return b;
}

}  // namespace cubedec
