#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cubedec/chain.hpp"
#include "cubedec/cube.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/geometry.hpp"

namespace cubedec {

/// All face vertex tuples of a cube, every dimension, the cube itself
/// included. Used by the pairwise-intersection axiom check.
inline std::set<std::vector<VertexId>> all_face_tuples(const OrientedCube& cube) {
    const int k = cube.dim();
    std::set<std::vector<VertexId>> out;
    for (unsigned free = 0; free < (1u << k); ++free) {
        std::vector<int> fixed_axes;
        for (int j = 0; j < k; ++j)
            if (!(free & (1u << j))) fixed_axes.push_back(j);
        for (unsigned sides = 0; sides < (1u << fixed_axes.size()); ++sides) {
            std::vector<VertexId> tuple;
            for (unsigned b = 0; b < (1u << k); ++b) {
                bool in_face = true;
                for (std::size_t t = 0; t < fixed_axes.size() && in_face; ++t) {
                    const unsigned want = (sides >> t) & 1u;
                    in_face = ((b >> fixed_axes[t]) & 1u) == want;
                }
                if (in_face) tuple.push_back(cube.corners()[b]);
            }
            std::sort(tuple.begin(), tuple.end());
            out.insert(std::move(tuple));
        }
    }
    return out;
}

struct ValidationReport {
    bool closure_ok = true;
    bool intersection_ok = true;
    bool manifold_ok = true;
    bool orientable_ok = true;
    std::vector<std::string> issues;

    bool all_passed() const { return closure_ok && intersection_ok && manifold_ok && orientable_ok; }
};

/// Immutable cubic complex: per-dimension cell lists with signed incidence.
/// Basis order within each dimension is lexicographic by sorted vertex tuple,
/// so operator matrices built on top are reproducible.
class CubicComplex {
public:
    using Embedding = cubedec::Embedding;
    using IncidenceRow = std::vector<std::pair<std::size_t, int>>;

    /// Builds a complex from cells of any dimensions. With `close_under_faces`
    /// every missing face is generated in canonical positive orientation.
    /// Duplicate vertex tuples must agree exactly as oriented cubes.
    static CubicComplex from_cells(int n, const std::vector<OrientedCube>& cells,
                                   bool close_under_faces = true,
                                   std::optional<Embedding> embedding = std::nullopt) {
        if (n < 1) throw InvalidDimension("complex dimension must be at least 1");
        CubicComplex C;
        C.dim_ = n;
        C.cells_.resize(n + 1);
        std::vector<std::map<std::vector<VertexId>, std::size_t>> seen(n + 1);
        auto insert = [&](const OrientedCube& c) -> bool {
            if (c.dim() > n) throw InvalidDimension("cell dimension exceeds complex dimension");
            auto key = c.sorted_vertices();
            auto [it, fresh] = seen[c.dim()].emplace(std::move(key), C.cells_[c.dim()].size());
            if (!fresh) {
                if (!(C.cells_[c.dim()][it->second] == c))
                    throw InvalidCube("conflicting cells on one vertex set");
                return false;
            }
            C.cells_[c.dim()].push_back(c);
            return true;
        };
        for (const auto& c : cells) insert(c);
        if (close_under_faces) {
            for (int k = n; k >= 1; --k)
                for (std::size_t i = 0; i < C.cells_[k].size(); ++i) {
                    const OrientedCube cell = C.cells_[k][i];
                    for (const auto& [face, coeff] : boundary_cube(cell)) insert(face);
                }
        }
        for (int k = 0; k <= n; ++k)
            std::sort(C.cells_[k].begin(), C.cells_[k].end(),
                      [](const OrientedCube& a, const OrientedCube& b) {
                          return a.sorted_vertices() < b.sorted_vertices();
                      });
        C.index_.resize(n + 1);
        for (int k = 0; k <= n; ++k)
            for (std::size_t i = 0; i < C.cells_[k].size(); ++i)
                C.index_[k].emplace(C.cells_[k][i].sorted_vertices(), i);
        C.embedding_ = std::move(embedding);
        if (C.embedding_) {
            for (const auto& v : C.cells_[0])
                if (!C.embedding_->count(v.corners()[0]))
                    throw NeedsEmbedding("embedding misses a vertex of the complex");
        }
        C.build_incidence();
        return C;
    }

    int dim() const { return dim_; }

    std::size_t cell_count(int k) const {
        check_dim(k);
        return cells_[k].size();
    }

    const std::vector<OrientedCube>& cells(int k) const {
        check_dim(k);
        return cells_[k];
    }

    const OrientedCube& cell(int k, std::size_t i) const { return cells(k).at(i); }

    bool contains(int k, const std::vector<VertexId>& sorted_tuple) const {
        check_dim(k);
        return index_[k].count(sorted_tuple) != 0;
    }

    std::optional<std::size_t> find(int k, const std::vector<VertexId>& sorted_tuple) const {
        check_dim(k);
        auto it = index_[k].find(sorted_tuple);
        if (it == index_[k].end()) return std::nullopt;
        return it->second;
    }

    /// Basis index of the cell plus the query's orientation relative to the
    /// stored positive cell.
    std::pair<std::size_t, int> locate(const OrientedCube& c) const {
        auto idx = find(c.dim(), c.sorted_vertices());
        if (!idx) throw InvalidCube("cell is not in the complex");
        return {*idx, c.orientation_sign_vs(cells_[c.dim()][*idx])};
    }

    /// Facets of cell i with induced signs relative to stored orientations.
    const IncidenceRow& incidence(int k, std::size_t i) const {
        check_dim(k);
        if (k == 0) throw InvalidDimension("0-cells have no facets");
        return incidence_[k].at(i);
    }

    /// Cells of dimension k+1 having cell i as a facet, with the same signs.
    const IncidenceRow& cofaces(int k, std::size_t i) const {
        check_dim(k);
        if (k == dim_) return empty_row_;
        return cofaces_[k].at(i);
    }

    const std::optional<Embedding>& embedding() const { return embedding_; }

    Chain chain_of(const OrientedCube& c, std::int64_t coeff = 1) const {
        auto [idx, sign] = locate(c);
        Chain out(c.dim());
        out.add_term(idx, sign * coeff);
        return out;
    }

    Chain boundary(const Chain& gamma) const {
        if (gamma.dim < 1 || gamma.dim > dim_) throw InvalidDimension("boundary degree out of range");
        Chain out(gamma.dim - 1);
        for (const auto& [cell, coeff] : gamma.coeffs)
            for (const auto& [face, sign] : incidence(gamma.dim, cell))
                out.add_term(face, sign * coeff);
        return out;
    }

    friend bool operator==(const CubicComplex& a, const CubicComplex& b) {
        return a.dim_ == b.dim_ && a.cells_ == b.cells_ && a.embedding_ == b.embedding_;
    }

private:
    void check_dim(int k) const {
        if (k < 0 || k > dim_) throw InvalidDimension("cell dimension out of range");
    }

    void build_incidence() {
        incidence_.assign(dim_ + 1, {});
        cofaces_.assign(dim_ + 1, {});
        for (int k = 0; k < dim_; ++k) cofaces_[k].assign(cells_[k].size(), {});
        for (int k = 1; k <= dim_; ++k) {
            incidence_[k].assign(cells_[k].size(), {});
            for (std::size_t i = 0; i < cells_[k].size(); ++i) {
                for (const auto& [face, coeff] : boundary_cube(cells_[k][i])) {
                    auto idx = find(k - 1, face.sorted_vertices());
                    if (!idx) continue;  // closure violations surface in validate_complex
                    const int sign = coeff * face.orientation_sign_vs(cells_[k - 1][*idx]);
                    incidence_[k][i].emplace_back(*idx, sign);
                    cofaces_[k - 1][*idx].emplace_back(i, sign);
                }
            }
        }
    }

    int dim_ = 0;
    std::vector<std::vector<OrientedCube>> cells_;
    std::vector<std::map<std::vector<VertexId>, std::size_t>> index_;
    std::vector<std::vector<IncidenceRow>> incidence_;
    std::vector<std::vector<IncidenceRow>> cofaces_;
    std::optional<Embedding> embedding_;
    IncidenceRow empty_row_;
};

/// Checks the complex axioms and the discrete-manifold conditions: closure
/// under faces, pairwise intersections being shared faces, every (n-1)-cell
/// having exactly two top cofaces, and those cofaces inducing opposite
/// orientations on it.
inline ValidationReport validate_complex(const CubicComplex& C) {
    ValidationReport report;
    const int n = C.dim();
    auto note = [&report](bool& flag, const std::string& msg) {
        flag = false;
        if (report.issues.size() < 20) report.issues.push_back(msg);
    };

    for (int k = 1; k <= n; ++k)
        for (std::size_t i = 0; i < C.cell_count(k); ++i)
            for (const auto& [face, coeff] : boundary_cube(C.cell(k, i)))
                if (!C.contains(k - 1, face.sorted_vertices()))
                    note(report.closure_ok,
                         "missing face of a " + std::to_string(k) + "-cell");

    struct Entry {
        std::vector<VertexId> tuple;
        std::set<std::vector<VertexId>> faces;
    };
    std::vector<Entry> entries;
    for (int k = 0; k <= n; ++k)
        for (const auto& c : C.cells(k)) entries.push_back({c.sorted_vertices(), all_face_tuples(c)});
    for (std::size_t a = 0; a < entries.size(); ++a) {
        for (std::size_t b = a + 1; b < entries.size(); ++b) {
            std::vector<VertexId> common;
            std::set_intersection(entries[a].tuple.begin(), entries[a].tuple.end(),
                                  entries[b].tuple.begin(), entries[b].tuple.end(),
                                  std::back_inserter(common));
            if (common.empty()) continue;
            if (!entries[a].faces.count(common) || !entries[b].faces.count(common))
                note(report.intersection_ok, "two cells meet outside a shared face");
        }
    }

    if (n >= 1) {
        for (std::size_t i = 0; i < C.cell_count(n - 1); ++i) {
            const auto& up = C.cofaces(n - 1, i);
            if (up.size() != 2) {
                note(report.manifold_ok,
                     "a codimension-1 cell has " + std::to_string(up.size()) + " cofaces");
                continue;
            }
            if (up[0].second + up[1].second != 0)
                note(report.orientable_ok, "a shared codimension-1 face does not cancel");
        }
    }
    return report;
}

}  // namespace cubedec
