#pragma once

#include <cstdint>
#include <map>

#include "cubedec/errors.hpp"

namespace cubedec {

/// Integer formal sum of positively oriented basis cells of one dimension.
/// A term on a negatively oriented cell is stored as the negated coefficient
/// on the positive basis cell; zero coefficients are dropped.
struct Chain {
    int dim = 0;
    std::map<std::size_t, std::int64_t> coeffs;

    Chain() = default;
    explicit Chain(int k) : dim(k) {}

    void add_term(std::size_t cell, std::int64_t coeff) {
        if (coeff == 0) return;
        auto [it, inserted] = coeffs.try_emplace(cell, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) coeffs.erase(it);
        }
    }

    std::int64_t coeff(std::size_t cell) const {
        auto it = coeffs.find(cell);
        return it == coeffs.end() ? 0 : it->second;
    }

    bool empty() const { return coeffs.empty(); }

    friend bool operator==(const Chain& a, const Chain& b) {
        return a.dim == b.dim && a.coeffs == b.coeffs;
    }
};

inline Chain chain_add(const Chain& a, const Chain& b) {
    if (a.dim != b.dim) throw DimensionError("chain dimensions differ");
    Chain out = a;
    for (const auto& [cell, coeff] : b.coeffs) out.add_term(cell, coeff);
    return out;
}

inline Chain chain_negate(const Chain& a) {
    Chain out(a.dim);
    for (const auto& [cell, coeff] : a.coeffs) out.coeffs.emplace(cell, -coeff);
    return out;
}

inline Chain chain_scale(const Chain& a, std::int64_t m) {
    Chain out(a.dim);
    if (m == 0) return out;
    for (const auto& [cell, coeff] : a.coeffs) out.coeffs.emplace(cell, m * coeff);
    return out;
}

}  // namespace cubedec
