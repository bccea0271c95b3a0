#pragma once

#include <cstddef>
#include <string>

#include "errors.hpp"

namespace sswm {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform rectangular detuning lattice. Sample i along an axis sits at
// center + (i - n/2) * span/n, so the center itself is always a lattice point
// and the span equals n * dnu (the half-open convention the discrete
// transforms expect). Frequencies are in gamma_31 units.
struct FrequencyGrid2D {
    double nu1_center = 0.0;
    double nu1_span = 0.0;
    int n1 = 0;
    double nu2_center = 0.0;
    double nu2_span = 0.0;
    int n2 = 0;

    double dnu1() const { return nu1_span / n1; }
    double dnu2() const { return nu2_span / n2; }
    double nu1(int i) const { return nu1_center + (i - n1 / 2) * dnu1(); }
    double nu2(int j) const { return nu2_center + (j - n2 / 2) * dnu2(); }
    double nu1_min() const { return nu1(0); }
    double nu1_max() const { return nu1(n1 - 1); }
    double nu2_min() const { return nu2(0); }
    double nu2_max() const { return nu2(n2 - 1); }
    std::size_t points() const { return std::size_t(n1) * std::size_t(n2); }
};

inline void validate(const FrequencyGrid2D& g) {
    if (g.n1 < 2 || g.n2 < 2)
        throw PreconditionError("degenerate grid: need at least 2 samples per axis, got " +
                                std::to_string(g.n1) + "x" + std::to_string(g.n2));
    if (!is_pow2(g.n1) || !is_pow2(g.n2))
        throw PreconditionError("grid sample counts must be powers of two, got " +
                                std::to_string(g.n1) + "x" + std::to_string(g.n2));
    if (!(g.nu1_span > 0.0) || !(g.nu2_span > 0.0))
        throw PreconditionError("grid spans must be positive");
}

}
