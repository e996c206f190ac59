#pragma once

#include <cstdint>
#include <random>

#include "cubedec/cochain.hpp"

namespace cubedec {

/// Deterministic random source: std::mt19937_64 with fixed output mappings,
/// so one seed yields one stream everywhere.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform on [lo, hi] by modulo; the residual bias is irrelevant at these
    /// spans and the mapping stays reproducible.
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

    /// Uniform on [0, 1): the top 53 bits scaled down.
    double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    int sign() { return (gen_() & 1u) ? +1 : -1; }

private:
    std::mt19937_64 gen_;
};

inline IntCochain random_int_cochain(SeededRng& rng, int dim, std::size_t count,
                                     std::int64_t lo = -9, std::int64_t hi = 9) {
    IntCochain out(dim, count);
    for (auto& v : out.values) v = rng.int_in(lo, hi);
    return out;
}

inline Cochain random_real_cochain(SeededRng& rng, int dim, std::size_t count) {
    Cochain out(dim, count);
    for (auto& v : out.values) v = 2.0 * rng.real01() - 1.0;
    return out;
}

}  // namespace cubedec
