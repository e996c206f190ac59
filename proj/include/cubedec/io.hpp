#pragma once

#include <array>
#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cubedec/chain.hpp"
#include "cubedec/cochain.hpp"
#include "cubedec/complex.hpp"
#include "cubedec/cube.hpp"
#include "cubedec/errors.hpp"
#include "cubedec/operators.hpp"
#include "cubedec/torus.hpp"

// Line-oriented text formats. Every file opens with a "<family> 1" header
// line and closes with "end"; entries appear in basis order, so identical
// objects serialize to identical bytes.

namespace cubedec {

/// Shortest decimal form that parses back to the same double.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

namespace detail {

struct LineReader {
    explicit LineReader(std::istream& in) : in_(in) {}

    int line() const { return line_; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    /// Advances to the next nonempty line; false at end of stream.
    bool next() {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            tokens_.clear();
            std::istringstream split(raw);
            std::string word;
            while (split >> word) tokens_.push_back(std::move(word));
            if (!tokens_.empty()) return true;
        }
        return false;
    }

    /// Next line must start with `tag` and, when `width` is nonzero, carry
    /// exactly `width` tokens.
    const std::vector<std::string>& expect(const std::string& tag, std::size_t width = 0) {
        if (!next()) throw ParseError("unexpected end of file, wanted '" + tag + "'", line_);
        if (tokens_[0] != tag)
            throw ParseError("expected '" + tag + "', got '" + tokens_[0] + "'", line_);
        if (width != 0 && tokens_.size() != width)
            throw ParseError("wrong field count for '" + tag + "'", line_);
        return tokens_;
    }

    std::int64_t as_int(std::size_t i) const {
        const std::string& s = token(i);
        errno = 0;
        char* end = nullptr;
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
            throw ParseError("not an integer: '" + s + "'", line_);
        return v;
    }

    double as_real(std::size_t i) const {
        const std::string& s = token(i);
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size())
            throw ParseError("not a number: '" + s + "'", line_);
        return v;
    }

    int as_sign(std::size_t i) const {
        const std::string& s = token(i);
        if (s == "+") return +1;
        if (s == "-") return -1;
        throw ParseError("expected '+' or '-', got '" + s + "'", line_);
    }

    std::uint64_t as_hex(std::size_t i) const {
        const std::string& s = token(i);
        errno = 0;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s.c_str(), &end, 16);
        if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
            throw ParseError("not a hex value: '" + s + "'", line_);
        return v;
    }

    const std::string& token(std::size_t i) const {
        if (i >= tokens_.size()) throw ParseError("missing field", line_);
        return tokens_[i];
    }

private:
    std::istream& in_;
    int line_ = 0;
    std::vector<std::string> tokens_;
};

inline void check_version(LineReader& r, const std::string& family) {
    const auto& t = r.expect(family, 2);
    if (t[1] != "1") throw ParseError("unsupported " + family + " version " + t[1], r.line());
}

inline void write_scalar(std::ostream& out, std::int64_t v) { out << v; }
inline void write_scalar(std::ostream& out, double v) { out << format_real(v); }
inline constexpr const char* scalar_tag(std::int64_t) { return "int"; }
inline constexpr const char* scalar_tag(double) { return "real"; }
inline std::int64_t read_scalar(const LineReader& r, std::size_t i, std::int64_t) {
    return r.as_int(i);
}
inline double read_scalar(const LineReader& r, std::size_t i, double) { return r.as_real(i); }

inline std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

}  // namespace detail

/// Header, vertex table, per-dimension cell records (canonical corner listing
/// plus sign), optional vertex coordinates.
inline void write_complex(std::ostream& out, const CubicComplex& C) {
    const int n = C.dim();
    out << "cubedec-complex 1\n";
    out << "n " << n << "\n";
    out << "counts";
    for (int k = 0; k <= n; ++k) out << ' ' << C.cell_count(k);
    out << "\n";
    out << "vertices " << C.cell_count(0) << "\n";
    for (const auto& v : C.cells(0)) {
        if (v.sign() != +1) throw Unsupported("negatively oriented vertex does not serialize");
        out << "v " << v.corners()[0] << "\n";
    }
    for (int k = 1; k <= n; ++k) {
        out << "cells " << k << ' ' << C.cell_count(k) << "\n";
        for (const auto& c : C.cells(k)) {
            out << "c " << (c.sign() > 0 ? '+' : '-');
            for (const VertexId id : c.corners()) out << ' ' << id;
            out << "\n";
        }
    }
    if (C.embedding()) {
        out << "embedding " << C.embedding()->size() << "\n";
        for (const auto& [id, coords] : *C.embedding()) {
            out << "e " << id;
            for (const double x : coords) out << ' ' << format_real(x);
            out << "\n";
        }
    }
    out << "end\n";
}

inline CubicComplex read_complex(std::istream& in) {
    detail::LineReader r(in);
    detail::check_version(r, "cubedec-complex");
    r.expect("n", 2);
    const int n = static_cast<int>(r.as_int(1));
    if (n < 1) throw ParseError("complex dimension must be at least 1", r.line());
    r.expect("counts", static_cast<std::size_t>(n) + 2);
    std::vector<std::size_t> counts(n + 1);
    for (int k = 0; k <= n; ++k) {
        const std::int64_t c = r.as_int(static_cast<std::size_t>(k) + 1);
        if (c < 0) throw ParseError("negative cell count", r.line());
        counts[k] = static_cast<std::size_t>(c);
    }

    std::vector<OrientedCube> cells;
    r.expect("vertices", 2);
    if (static_cast<std::size_t>(r.as_int(1)) != counts[0])
        throw ParseError("vertex table size disagrees with counts", r.line());
    const auto make_cell = [&r](std::vector<VertexId> corners, int sign) {
        try {
            return OrientedCube::from_corner_order(std::move(corners), sign);
        } catch (const Error& e) {
            throw ParseError(e.what(), r.line());
        }
    };
    for (std::size_t i = 0; i < counts[0]; ++i) {
        r.expect("v", 2);
        cells.push_back(make_cell({static_cast<VertexId>(r.as_int(1))}, +1));
    }
    for (int k = 1; k <= n; ++k) {
        r.expect("cells", 3);
        if (r.as_int(1) != k || static_cast<std::size_t>(r.as_int(2)) != counts[k])
            throw ParseError("cell block header disagrees with counts", r.line());
        const std::size_t width = (std::size_t{1} << k) + 2;
        for (std::size_t i = 0; i < counts[k]; ++i) {
            r.expect("c", width);
            const int sign = r.as_sign(1);
            std::vector<VertexId> corners(width - 2);
            for (std::size_t t = 0; t < corners.size(); ++t)
                corners[t] = static_cast<VertexId>(r.as_int(t + 2));
            cells.push_back(make_cell(std::move(corners), sign));
        }
    }

    std::optional<Embedding> embedding;
    if (!r.next()) throw ParseError("unexpected end of file, wanted 'end'", r.line());
    if (r.tokens()[0] == "embedding") {
        const std::size_t m = static_cast<std::size_t>(r.as_int(1));
        Embedding emb;
        for (std::size_t i = 0; i < m; ++i) {
            r.expect("e");
            const VertexId id = static_cast<VertexId>(r.as_int(1));
            std::vector<double> coords;
            for (std::size_t t = 2; t < r.tokens().size(); ++t) coords.push_back(r.as_real(t));
            if (!emb.emplace(id, std::move(coords)).second)
                throw ParseError("repeated vertex in embedding", r.line());
        }
        embedding = std::move(emb);
        r.expect("end", 1);
    } else if (r.tokens()[0] != "end") {
        throw ParseError("expected 'embedding' or 'end'", r.line());
    }

    try {
        CubicComplex C = CubicComplex::from_cells(n, cells, false, std::move(embedding));
        for (int k = 0; k <= n; ++k)
            if (C.cell_count(k) != counts[k])
                throw ParseError("duplicate cell records in dimension " + std::to_string(k),
                                 r.line());
        return C;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what(), r.line());
    }
}

/// One entry per basis cell, keyed by the sorted vertex tuple; values refer
/// to the complex's stored orientation of that cell.
template <class Scalar>
void write_cochain(std::ostream& out, const CubicComplex& C, const BasicCochain<Scalar>& omega) {
    if (omega.dim < 0 || omega.dim > C.dim() ||
        omega.values.size() != C.cell_count(omega.dim))
        throw DimensionError("cochain does not fit the complex");
    out << "cubedec-cochain 1\n";
    out << "dim " << omega.dim << "\n";
    out << "scalar " << detail::scalar_tag(Scalar{}) << "\n";
    out << "entries " << omega.values.size() << "\n";
    for (std::size_t i = 0; i < omega.values.size(); ++i) {
        out << "e";
        for (const VertexId id : C.cell(omega.dim, i).sorted_vertices()) out << ' ' << id;
        out << ' ';
        detail::write_scalar(out, omega.values[i]);
        out << "\n";
    }
    out << "end\n";
}

template <class Scalar>
BasicCochain<Scalar> read_cochain(std::istream& in, const CubicComplex& C) {
    detail::LineReader r(in);
    detail::check_version(r, "cubedec-cochain");
    r.expect("dim", 2);
    const int dim = static_cast<int>(r.as_int(1));
    if (dim < 0 || dim > C.dim()) throw ParseError("cochain degree out of range", r.line());
    r.expect("scalar", 2);
    if (r.token(1) != detail::scalar_tag(Scalar{}))
        throw ParseError("scalar mode mismatch: file is '" + r.token(1) + "'", r.line());
    r.expect("entries", 2);
    if (static_cast<std::size_t>(r.as_int(1)) != C.cell_count(dim))
        throw ParseError("entry count does not match the complex", r.line());

    const std::size_t width = (std::size_t{1} << dim) + 2;
    BasicCochain<Scalar> out(dim, C.cell_count(dim));
    std::vector<bool> seen(out.values.size(), false);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        r.expect("e", width);
        std::vector<VertexId> tuple(width - 2);
        for (std::size_t t = 0; t < tuple.size(); ++t)
            tuple[t] = static_cast<VertexId>(r.as_int(t + 1));
        const auto idx = C.find(dim, tuple);
        if (!idx) throw ParseError("cell is not in the complex", r.line());
        if (seen[*idx]) throw ParseError("repeated cell entry", r.line());
        seen[*idx] = true;
        out.values[*idx] = detail::read_scalar(r, width - 1, Scalar{});
    }
    r.expect("end", 1);
    return out;
}

/// Sparse signed cell sums, keyed like cochains, with integer coefficients.
inline void write_chain(std::ostream& out, const CubicComplex& C, const Chain& gamma) {
    if (gamma.dim < 0 || gamma.dim > C.dim()) throw DimensionError("chain does not fit the complex");
    out << "cubedec-chain 1\n";
    out << "dim " << gamma.dim << "\n";
    out << "terms " << gamma.coeffs.size() << "\n";
    for (const auto& [cell, coeff] : gamma.coeffs) {
        out << "t";
        for (const VertexId id : C.cell(gamma.dim, cell).sorted_vertices()) out << ' ' << id;
        out << ' ' << coeff << "\n";
    }
    out << "end\n";
}

inline Chain read_chain(std::istream& in, const CubicComplex& C) {
    detail::LineReader r(in);
    detail::check_version(r, "cubedec-chain");
    r.expect("dim", 2);
    const int dim = static_cast<int>(r.as_int(1));
    if (dim < 0 || dim > C.dim()) throw ParseError("chain degree out of range", r.line());
    r.expect("terms", 2);
    const std::int64_t terms = r.as_int(1);
    const std::size_t width = (std::size_t{1} << dim) + 2;
    Chain out(dim);
    for (std::int64_t i = 0; i < terms; ++i) {
        r.expect("t", width);
        std::vector<VertexId> tuple(width - 2);
        for (std::size_t t = 0; t < tuple.size(); ++t)
            tuple[t] = static_cast<VertexId>(r.as_int(t + 1));
        const auto idx = C.find(dim, tuple);
        if (!idx) throw ParseError("cell is not in the complex", r.line());
        out.add_term(*idx, r.as_int(width - 1));
    }
    r.expect("end", 1);
    return out;
}

namespace detail {

inline const char* field_kind(int dim) {
    switch (dim) {
        case 0: return "vertex";
        case 1: return "edge";
        case 2: return "face";
        case 3: return "cell";
        default: throw InvalidDimension("field degree out of range");
    }
}

inline int field_dim(const std::string& kind, int line) {
    if (kind == "vertex") return 0;
    if (kind == "edge") return 1;
    if (kind == "face") return 2;
    if (kind == "cell") return 3;
    throw ParseError("unknown field kind '" + kind + "'", line);
}

}  // namespace detail

/// Torus fields key entries by lattice coordinates plus, for edges, the axis
/// direction and, for faces, the face number.
template <class Scalar>
void write_field(std::ostream& out, const TorusMesh& mesh, const BasicCochain<Scalar>& field) {
    const int n = mesh.n();
    if (field.dim < 0 || field.dim > n ||
        field.values.size() != mesh.complex().cell_count(field.dim))
        throw DimensionError("field does not fit the mesh");
    out << "cubedec-field 1\n";
    out << "n " << n << "\n";
    out << "N " << mesh.side() << "\n";
    out << "kind " << detail::field_kind(field.dim) << "\n";
    out << "scalar " << detail::scalar_tag(Scalar{}) << "\n";
    out << "entries " << field.values.size() << "\n";
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const TorusCellKey key = mesh.cell_key(field.dim, i);
        out << "f";
        for (int a = 0; a < n; ++a) out << ' ' << key.x[a];
        if (field.dim == 1) out << ' ' << (std::countr_zero(key.axes) + 1);
        if (field.dim == 2) out << ' ' << mesh.face_number(key.axes);
        out << ' ';
        detail::write_scalar(out, field.values[i]);
        out << "\n";
    }
    out << "end\n";
}

template <class Scalar>
BasicCochain<Scalar> read_field(std::istream& in, const TorusMesh& mesh) {
    detail::LineReader r(in);
    detail::check_version(r, "cubedec-field");
    const int n = mesh.n();
    r.expect("n", 2);
    if (r.as_int(1) != n) throw ParseError("field dimension does not match the mesh", r.line());
    r.expect("N", 2);
    if (r.as_int(1) != mesh.side())
        throw ParseError("field period does not match the mesh", r.line());
    r.expect("kind", 2);
    const int dim = detail::field_dim(r.token(1), r.line());
    if (dim > n) throw ParseError("field kind exceeds the mesh dimension", r.line());
    r.expect("scalar", 2);
    if (r.token(1) != detail::scalar_tag(Scalar{}))
        throw ParseError("scalar mode mismatch: file is '" + r.token(1) + "'", r.line());
    r.expect("entries", 2);
    if (static_cast<std::size_t>(r.as_int(1)) != mesh.complex().cell_count(dim))
        throw ParseError("entry count does not match the mesh", r.line());

    const bool indexed = dim == 1 || dim == 2;
    const std::size_t width = static_cast<std::size_t>(n) + (indexed ? 3 : 2);
    BasicCochain<Scalar> out(dim, mesh.complex().cell_count(dim));
    std::vector<bool> seen(out.values.size(), false);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        r.expect("f", width);
        std::array<int, 3> x{0, 0, 0};
        for (int a = 0; a < n; ++a) x[a] = static_cast<int>(r.as_int(static_cast<std::size_t>(a) + 1));
        std::size_t idx = 0;
        if (dim == 0) {
            idx = mesh.vertex_index(x);
        } else if (dim == 1) {
            const int dir = static_cast<int>(r.as_int(static_cast<std::size_t>(n) + 1));
            if (dir < 1 || dir > n) throw ParseError("edge direction out of range", r.line());
            idx = mesh.edge_index(x, dir);
        } else if (dim == 2) {
            const int K = static_cast<int>(r.as_int(static_cast<std::size_t>(n) + 1));
            idx = mesh.face_index(x, K);
        } else {
            idx = mesh.top_index(x);
        }
        if (seen[idx]) throw ParseError("repeated field entry", r.line());
        seen[idx] = true;
        out.values[idx] = detail::read_scalar(r, width - 1, Scalar{});
    }
    r.expect("end", 1);
    return out;
}

/// An integer operator in triplet form, tagged with the complex it was built
/// on, its degree, and hashes of the row and column bases.
struct OperatorRecord {
    std::string complex_name;
    std::string op;
    int k = 0;
    std::uint64_t row_basis = 0;
    std::uint64_t col_basis = 0;
    IntMatrix matrix;
};

inline void write_operator(std::ostream& out, const OperatorRecord& rec) {
    IntMatrix m = rec.matrix;
    m.makeCompressed();
    out << "cubedec-operator 1\n";
    out << "complex " << rec.complex_name << "\n";
    out << "op " << rec.op << "\n";
    out << "k " << rec.k << "\n";
    out << "rows " << m.rows() << "\n";
    out << "cols " << m.cols() << "\n";
    out << "row-basis " << detail::hex16(rec.row_basis) << "\n";
    out << "col-basis " << detail::hex16(rec.col_basis) << "\n";
    out << "nnz " << m.nonZeros() << "\n";
    for (int col = 0; col < m.outerSize(); ++col)
        for (IntMatrix::InnerIterator it(m, col); it; ++it)
            out << "m " << it.row() << ' ' << col << ' ' << it.value() << "\n";
    out << "end\n";
}

inline OperatorRecord read_operator(std::istream& in) {
    detail::LineReader r(in);
    detail::check_version(r, "cubedec-operator");
    OperatorRecord rec;
    rec.complex_name = r.expect("complex", 2)[1];
    rec.op = r.expect("op", 2)[1];
    r.expect("k", 2);
    rec.k = static_cast<int>(r.as_int(1));
    r.expect("rows", 2);
    const std::int64_t rows = r.as_int(1);
    r.expect("cols", 2);
    const std::int64_t cols = r.as_int(1);
    if (rows < 0 || cols < 0) throw ParseError("negative matrix extent", r.line());
    r.expect("row-basis", 2);
    rec.row_basis = r.as_hex(1);
    r.expect("col-basis", 2);
    rec.col_basis = r.as_hex(1);
    r.expect("nnz", 2);
    const std::int64_t nnz = r.as_int(1);

    std::vector<Eigen::Triplet<std::int64_t>> triplets;
    triplets.reserve(static_cast<std::size_t>(nnz));
    for (std::int64_t i = 0; i < nnz; ++i) {
        r.expect("m", 4);
        const std::int64_t row = r.as_int(1);
        const std::int64_t col = r.as_int(2);
        if (row < 0 || row >= rows || col < 0 || col >= cols)
            throw ParseError("triplet outside the matrix", r.line());
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), r.as_int(3));
    }
    r.expect("end", 1);
    rec.matrix = IntMatrix(static_cast<int>(rows), static_cast<int>(cols));
    rec.matrix.setFromTriplets(triplets.begin(), triplets.end());
    rec.matrix.makeCompressed();
    return rec;
}

}  // namespace cubedec
