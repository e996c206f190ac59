#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cubedec/chain.hpp"
#include "cubedec/errors.hpp"

namespace cubedec {

/// Discrete k-form: one value per positively oriented basis k-cell. Evaluation
/// on a negatively oriented cell negates the value. Scalar is double for
/// solver work and int64 when identities are to hold exactly.
template <class Scalar>
struct BasicCochain {
    int dim = 0;
    std::vector<Scalar> values;

    BasicCochain() = default;
    BasicCochain(int k, std::size_t n_cells) : dim(k), values(n_cells, Scalar(0)) {}

    std::size_t size() const { return values.size(); }
    Scalar& operator[](std::size_t i) { return values[i]; }
    const Scalar& operator[](std::size_t i) const { return values[i]; }

    friend bool operator==(const BasicCochain& a, const BasicCochain& b) {
        return a.dim == b.dim && a.values == b.values;
    }
};

using Cochain = BasicCochain<double>;
using IntCochain = BasicCochain<std::int64_t>;

/// [omega, gamma] = omega(gamma). Accumulation runs in ascending cell index.
template <class Scalar>
Scalar pairing(const BasicCochain<Scalar>& omega, const Chain& gamma) {
    if (omega.dim != gamma.dim) throw DimensionError("pairing degree mismatch");
    Scalar acc(0);
    for (const auto& [cell, coeff] : gamma.coeffs) {
        if (cell >= omega.values.size()) throw DimensionError("chain cell outside cochain basis");
        acc += Scalar(coeff) * omega.values[cell];
    }
    return acc;
}

/// Coefficient dot product over the positive-cell basis, ascending index.
template <class Scalar>
Scalar inner_product(const BasicCochain<Scalar>& a, const BasicCochain<Scalar>& b) {
    if (a.dim != b.dim) throw DimensionError("inner product degree mismatch");
    if (a.values.size() != b.values.size()) throw DimensionError("inner product basis mismatch");
    Scalar acc(0);
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc;
}

inline double norm(const Cochain& a) { return std::sqrt(inner_product(a, a)); }

template <class Scalar>
BasicCochain<Scalar> cochain_add(const BasicCochain<Scalar>& a, const BasicCochain<Scalar>& b) {
    if (a.dim != b.dim || a.values.size() != b.values.size())
        throw DimensionError("cochain sum mismatch");
    BasicCochain<Scalar> out(a.dim, a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] + b.values[i];
    return out;
}

template <class Scalar>
BasicCochain<Scalar> cochain_sub(const BasicCochain<Scalar>& a, const BasicCochain<Scalar>& b) {
    if (a.dim != b.dim || a.values.size() != b.values.size())
        throw DimensionError("cochain difference mismatch");
    BasicCochain<Scalar> out(a.dim, a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] - b.values[i];
    return out;
}

template <class Scalar>
BasicCochain<Scalar> cochain_scale(const BasicCochain<Scalar>& a, Scalar m) {
    BasicCochain<Scalar> out(a.dim, a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = m * a.values[i];
    return out;
}

inline Cochain to_double(const IntCochain& a) {
    Cochain out(a.dim, a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.values[i] = static_cast<double>(a.values[i]);
    return out;
}

}  // namespace cubedec
