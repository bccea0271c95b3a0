#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace sswm {

// Iterative radix-2 transform, in place, unnormalized. sign = +1 applies
// e^{+2 pi i jk/n} (the synthesis direction used throughout), sign = -1 the
// analysis direction. Precomputes the twiddle table once so row batches can
// share it; the plan is immutable after construction and safe to use from
// several threads at once.
struct FftPlan {
    int n = 0;
    int sign = +1;
    std::vector<std::complex<double>> w;  // w[k] = e^{sign * 2 pi i k / n}, k < n/2

    FftPlan() = default;
    FftPlan(int n_, int sign_) : n(n_), sign(sign_), w(std::size_t(n_) / 2) {
        if (!is_pow2(n))
            throw InvariantError("fft length must be a power of two, got " + std::to_string(n));
        for (int k = 0; k < n / 2; ++k)
            w[std::size_t(k)] = std::polar(1.0, sign * 2.0 * M_PI * k / n);
    }

    void run(std::complex<double>* a) const {
        for (int i = 1, j = 0; i < n; ++i) {
            int bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (int len = 2; len <= n; len <<= 1) {
            const int half = len / 2;
            const int step = n / len;
            for (int i = 0; i < n; i += len) {
                for (int k = 0; k < half; ++k) {
                    const std::complex<double> u = a[i + k];
                    const std::complex<double> v = a[i + k + half] * w[std::size_t(k) * step];
                    a[i + k] = u + v;
                    a[i + k + half] = u - v;
                }
            }
        }
    }
};

inline void fft_pow2(std::complex<double>* a, int n, int sign) {
    FftPlan(n, sign).run(a);
}

}
