#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fft.hpp"
#include "spectra.hpp"

namespace sswm {

// One axis of the discrete spectrum-to-delay transform:
//   A[m] = dnu * sum_k row[k] e^{+i nu_k tau_m},  nu_k = center + (k - n/2) dnu,
//   tau_m = (m - n/2) dtau,  dtau = 2 pi / (n dnu).
// Splitting the phase gives an alternating ramp before the unnormalized
// positive-exponent FFT, a ramp and a global parity sign after it, and a
// carrier e^{+i center tau_m}. The carrier is skippable when only magnitudes
// matter. Overwrites row; plan must hold sign = +1 twiddles of length n.
inline void transform_axis(std::complex<double>* row, int n, double center, double dnu,
                           const FftPlan& plan, bool with_carrier = true) {
    for (int k = 1; k < n; k += 2) row[k] = -row[k];
    plan.run(row);
    const double sgn = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    const double dtau = 2.0 * M_PI / (n * dnu);
    for (int m = 0; m < n; ++m) {
        const double fac = dnu * sgn * ((m & 1) ? -1.0 : 1.0);
        if (with_carrier) {
            const double tau = (m - n / 2) * dtau;
            row[m] *= fac * std::exp(cd(0.0, center * tau));
        } else {
            row[m] *= fac;
        }
    }
}

// Triphoton amplitude on the centered delay lattice (tau31, tau32).
struct Amplitude3 {
    std::vector<double> tau1, tau2;
    std::vector<std::complex<double>> a;  // row major, n1 x n2
    int n1 = 0, n2 = 0;
    double dtau1 = 0.0, dtau2 = 0.0;

    const std::complex<double>& at(int i, int j) const { return a[std::size_t(i) * n2 + j]; }
};

// Two-axis transform of the generation kernel. Row and column FFT passes
// write disjoint slices and the scaling pass is pointwise, so the output is
// bit-identical for every thread count.
inline Amplitude3 amplitude_a3(const SpectralField2D& f, int threads = 0) {
    if (f.quantity != Quantity::kernel)
        throw InvariantError("the delay transform consumes only kernel fields, got " +
                             std::string(to_string(f.quantity)));
    const FrequencyGrid2D& g = f.grid;
    validate(g);
    const int n1 = g.n1, n2 = g.n2;

    Amplitude3 A;
    A.n1 = n1;
    A.n2 = n2;
    A.dtau1 = 2.0 * M_PI / g.nu1_span;
    A.dtau2 = 2.0 * M_PI / g.nu2_span;
    A.tau1.resize(std::size_t(n1));
    A.tau2.resize(std::size_t(n2));
    for (int i = 0; i < n1; ++i) A.tau1[std::size_t(i)] = (i - n1 / 2) * A.dtau1;
    for (int j = 0; j < n2; ++j) A.tau2[std::size_t(j)] = (j - n2 / 2) * A.dtau2;
    A.a = f.values;

    // ramp on both input axes
    parallel_for(0, std::size_t(n1), [&](std::size_t i) {
        std::complex<double>* row = A.a.data() + i * std::size_t(n2);
        const bool odd_i = (i & 1u) != 0;
        for (int j = 0; j < n2; ++j) {
            const bool flip = odd_i != ((j & 1) != 0);
            if (flip) row[j] = -row[j];
        }
    }, threads);

    const FftPlan plan2(n2, +1);
    parallel_for(0, std::size_t(n1), [&](std::size_t i) {
        plan2.run(A.a.data() + i * std::size_t(n2));
    }, threads);

    const FftPlan plan1(n1, +1);
    parallel_for(0, std::size_t(n2), [&](std::size_t j) {
        std::vector<std::complex<double>> col(std::size_t(n1));
        for (int i = 0; i < n1; ++i) col[std::size_t(i)] = A.a[std::size_t(i) * n2 + j];
        plan1.run(col.data());
        for (int i = 0; i < n1; ++i) A.a[std::size_t(i) * n2 + j] = col[std::size_t(i)];
    }, threads);

    // output ramps, parity signs, carriers and the measure factor combine
    // into separable per-axis weights
    const double sgn = (((n1 / 2) % 2 == 0) ? 1.0 : -1.0) * (((n2 / 2) % 2 == 0) ? 1.0 : -1.0);
    std::vector<std::complex<double>> wrow(std::size_t(n1)), wcol(std::size_t(n2));
    for (int i = 0; i < n1; ++i) {
        const double r = ((i & 1) ? -1.0 : 1.0) * g.dnu1() * sgn;
        wrow[std::size_t(i)] = r * std::exp(cd(0.0, g.nu1_center * A.tau1[std::size_t(i)]));
    }
    for (int j = 0; j < n2; ++j) {
        const double r = ((j & 1) ? -1.0 : 1.0) * g.dnu2();
        wcol[std::size_t(j)] = r * std::exp(cd(0.0, g.nu2_center * A.tau2[std::size_t(j)]));
    }
    parallel_for(0, std::size_t(n1), [&](std::size_t i) {
        std::complex<double>* row = A.a.data() + i * std::size_t(n2);
        const std::complex<double> wr = wrow[i];
        for (int j = 0; j < n2; ++j) row[j] *= wr * wcol[std::size_t(j)];
    }, threads);

    for (const auto& v : A.a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvariantError("non-finite sample in delay amplitude");
    return A;
}

// Direct lattice-rule evaluation of the same double sum at arbitrary delay
// probes: no ffts, no ramps, a completely independent code path. Probes must
// lie within the delay window the transform can reach.
inline std::vector<cd> quadrature_a3(const SpectralField2D& f,
                                     const std::vector<std::pair<double, double>>& pts,
                                     int threads = 0) {
    if (f.quantity != Quantity::kernel)
        throw InvariantError("the quadrature cross-check consumes only kernel fields, got " +
                             std::string(to_string(f.quantity)));
    if (pts.size() > 64)
        throw PreconditionError("quadrature cross-check is capped at 64 probe points, got " +
                                std::to_string(pts.size()));
    const FrequencyGrid2D& g = f.grid;
    const double t1max = M_PI / g.dnu1();
    const double t2max = M_PI / g.dnu2();
    for (const auto& pt : pts)
        if (std::abs(pt.first) > t1max || std::abs(pt.second) > t2max)
            throw PreconditionError("probe delay outside the transform window: |tau31| <= " +
                                    std::to_string(t1max) + ", |tau32| <= " +
                                    std::to_string(t2max));
    std::vector<cd> out(pts.size());
    parallel_for(0, pts.size(), [&](std::size_t k) {
        const double t1 = pts[k].first, t2 = pts[k].second;
        std::vector<cd> e2(std::size_t(g.n2));
        for (int j = 0; j < g.n2; ++j) e2[std::size_t(j)] = std::exp(cd(0.0, g.nu2(j) * t2));
        cd acc = 0.0;
        for (int i = 0; i < g.n1; ++i) {
            const cd* row = f.values.data() + std::size_t(i) * g.n2;
            cd inner = 0.0;
            for (int j = 0; j < g.n2; ++j) inner += row[j] * e2[std::size_t(j)];
            acc += inner * std::exp(cd(0.0, g.nu1(i) * t1));
        }
        out[k] = acc * g.dnu1() * g.dnu2();
    }, threads);
    return out;
}

// Divides by the maximum, returning the prior maximum (0 leaves the data
// untouched). Normalizing twice is the same as normalizing once.
inline double normalize_max(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    if (m > 0.0)
        for (double& x : v) x /= m;
    return m;
}

// Triple-coincidence rate surface, peak-normalized.
struct CorrelationSurface {
    std::vector<double> tau1, tau2;
    std::vector<double> r3;  // row major, n1 x n2
    int n1 = 0, n2 = 0;
    double dtau1 = 0.0, dtau2 = 0.0;
    double normalization = 0.0;  // peak |A|^2 before normalization

    double at(int i, int j) const { return r3[std::size_t(i) * n2 + j]; }
};

inline CorrelationSurface r3_from_amplitude(const Amplitude3& A) {
    CorrelationSurface s;
    s.tau1 = A.tau1;
    s.tau2 = A.tau2;
    s.n1 = A.n1;
    s.n2 = A.n2;
    s.dtau1 = A.dtau1;
    s.dtau2 = A.dtau2;
    s.r3.resize(A.a.size());
    for (std::size_t k = 0; k < A.a.size(); ++k) s.r3[k] = std::norm(A.a[k]);
    s.normalization = normalize_max(s.r3);
    return s;
}

inline CorrelationSurface r3(const SystemParams& p, const FrequencyGrid2D& g, int threads = 0) {
    const SpectralField2D f = evaluate(Quantity::kernel, p, g, threads);
    const Amplitude3 A = amplitude_a3(f, threads);
    return r3_from_amplitude(A);
}

// Pairwise rate left after tracing out one detection channel, peak-normalized.
// traced_over = "s1" integrates the tau31 axis away (keeps tau32); "s2" keeps
// tau31. Rows are transformed in fixed-size batches and accumulated serially
// in index order, so the reduction is independent of the thread count.
struct ConditionalTrace {
    std::vector<double> tau;
    std::vector<double> r2;
    std::string traced_over;
    double normalization = 0.0;
};

inline ConditionalTrace r2_conditional(const SpectralField2D& f, const std::string& traced,
                                       int threads = 0) {
    if (f.quantity != Quantity::kernel)
        throw InvariantError("pair correlations consume only kernel fields, got " +
                             std::string(to_string(f.quantity)));
    if (traced != "s1" && traced != "s2")
        throw ConfigError("traced channel must be 's1' or 's2', got '" + traced + "'");
    const FrequencyGrid2D& g = f.grid;
    validate(g);
    const bool keep2 = (traced == "s1");
    const int nkeep = keep2 ? g.n2 : g.n1;
    const int nsum = keep2 ? g.n1 : g.n2;
    const double dnu_keep = keep2 ? g.dnu2() : g.dnu1();
    const double dnu_sum = keep2 ? g.dnu1() : g.dnu2();

    ConditionalTrace t;
    t.traced_over = traced;
    t.tau.resize(std::size_t(nkeep));
    const double dtau = 2.0 * M_PI / (nkeep * dnu_keep);
    for (int m = 0; m < nkeep; ++m) t.tau[std::size_t(m)] = (m - nkeep / 2) * dtau;

    const FftPlan plan(nkeep, +1);
    std::vector<long double> acc(std::size_t(nkeep), 0.0L);
    constexpr int batch = 256;
    std::vector<std::complex<double>> buf(std::size_t(batch) * std::size_t(nkeep));

    for (int base = 0; base < nsum; base += batch) {
        const int count = std::min(batch, nsum - base);
        parallel_for(0, std::size_t(count), [&](std::size_t r) {
            std::complex<double>* line = buf.data() + r * std::size_t(nkeep);
            const int idx = base + int(r);
            if (keep2) {
                const cd* src = f.values.data() + std::size_t(idx) * g.n2;
                for (int j = 0; j < nkeep; ++j) line[j] = src[j];
                transform_axis(line, nkeep, g.nu2_center, g.dnu2(), plan, false);
            } else {
                for (int i = 0; i < nkeep; ++i)
                    line[i] = f.values[std::size_t(i) * g.n2 + idx];
                transform_axis(line, nkeep, g.nu1_center, g.dnu1(), plan, false);
            }
        }, threads);
        for (int r = 0; r < count; ++r) {
            const std::complex<double>* line = buf.data() + std::size_t(r) * std::size_t(nkeep);
            for (int m = 0; m < nkeep; ++m)
                acc[std::size_t(m)] += (long double)std::norm(line[m]) * dnu_sum;
        }
    }

    t.r2.resize(std::size_t(nkeep));
    for (int m = 0; m < nkeep; ++m) t.r2[std::size_t(m)] = double(acc[std::size_t(m)]);
    t.normalization = normalize_max(t.r2);
    return t;
}

inline ConditionalTrace r2_conditional(const SystemParams& p, const FrequencyGrid2D& g,
                                       const std::string& traced, int threads = 0) {
    const SpectralField2D f = evaluate(Quantity::kernel, p, g, threads);
    return r2_conditional(f, traced, threads);
}

// Relative defect of the energy identity
//   sum |A|^2 dtau1 dtau2 = (2 pi)^2 sum |f|^2 dnu1 dnu2.
inline double parseval_defect(const SpectralField2D& f, const Amplitude3& A) {
    long double es = 0.0L, et = 0.0L;
    for (const auto& v : f.values) es += (long double)std::norm(v);
    for (const auto& v : A.a) et += (long double)std::norm(v);
    const long double twopi = 2.0L * 3.14159265358979323846264338327950288L;
    const long double lhs = et * A.dtau1 * A.dtau2;
    const long double rhs = es * f.grid.dnu1() * f.grid.dnu2() * twopi * twopi;
    if (rhs == 0.0L) return 0.0L;
    return double(std::abs((lhs - rhs) / rhs));
}

// Local maxima of a trace on the half-axis holding the global maximum,
// parabolically refined, kept above frac of the global maximum, ordered by
// |tau| and truncated to the first `count`.
inline std::vector<double> trace_maxima(const ConditionalTrace& t, double frac = 0.04,
                                        int count = 5) {
    const int n = int(t.r2.size());
    if (n < 3) throw PreconditionError("trace too short for maxima detection");
    int imax = 0;
    for (int k = 1; k < n; ++k)
        if (t.r2[std::size_t(k)] > t.r2[std::size_t(imax)]) imax = k;
    const bool positive_side = t.tau[std::size_t(imax)] >= 0.0;
    const double gmax = t.r2[std::size_t(imax)];
    const double cut = frac * gmax;

    std::vector<double> times;
    for (int k = 1; k + 1 < n; ++k) {
        const double tau = t.tau[std::size_t(k)];
        if (positive_side ? (tau < 0.0) : (tau > 0.0)) continue;
        const double ym = t.r2[std::size_t(k - 1)];
        const double y0 = t.r2[std::size_t(k)];
        const double yp = t.r2[std::size_t(k + 1)];
        if (!(y0 > ym && y0 > yp) || y0 < cut) continue;
        const double denom = ym - 2.0 * y0 + yp;
        const double dt = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
        times.push_back(tau + dt * (t.tau[1] - t.tau[0]));
    }
    std::sort(times.begin(), times.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (int(times.size()) > count) times.resize(std::size_t(count));
    return times;
}

// Mean gap between consecutive refined maxima (needs at least two).
inline double maxima_spacing(const ConditionalTrace& t, double frac = 0.04, int count = 5) {
    std::vector<double> times = trace_maxima(t, frac, count);
    if (times.size() < 2)
        throw PreconditionError("fewer than two trace maxima above threshold; "
                                "no oscillation period to measure");
    double acc = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
        acc += std::abs(times[k] - times[k - 1]);
    return acc / double(times.size() - 1);
}

// Width of the region where the normalized trace stays at or above 1/e:
// last crossing minus first crossing.
inline double extent_1e(const ConditionalTrace& t) {
    const double cut = std::exp(-1.0);
    const int n = int(t.r2.size());
    int first = -1, last = -1;
    for (int k = 0; k < n; ++k) {
        if (t.r2[std::size_t(k)] >= cut) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) throw PreconditionError("trace never reaches 1/e of its peak");
    return t.tau[std::size_t(last)] - t.tau[std::size_t(first)];
}

// Which physics shapes the correlation time: the transparency bandwidth, the
// slow-light transit bandwidth, or the dressed-state oscillation. rho
// compares the tighter of the two bandwidth filters against the sharpest
// dressed linewidth.
struct RegimeReport {
    enum class Regime { DampedRabi, GroupDelay, Hybrid };
    Regime regime = Regime::Hybrid;
    double delta_omega_tr = 0.0;  // rad/s
    double delta_omega_sl = 0.0;  // rad/s
    double gamma_e_min = 0.0;     // rad/s
    double rho = 0.0;
};

inline const char* to_string(RegimeReport::Regime r) {
    switch (r) {
        case RegimeReport::Regime::DampedRabi: return "DampedRabi";
        case RegimeReport::Regime::GroupDelay: return "GroupDelay";
        case RegimeReport::Regime::Hybrid: return "Hybrid";
    }
    return "?";
}

inline RegimeReport classify_regime(const SystemParams& p) {
    const EitMetrics m = eit_metrics(p);
    RegimeReport r;
    r.delta_omega_tr = m.omega_tr;
    // sinc half-power bandwidth of the transit filter
    r.delta_omega_sl = 2.0 * 1.39 * m.v3 / p.length_L;
    r.gamma_e_min = std::min(gamma_e1(p), gamma_e2(p)) * p.si_per_unit();
    r.rho = std::min(r.delta_omega_tr, r.delta_omega_sl) / r.gamma_e_min;
    r.regime = r.rho < (1.0 / 3.0) ? RegimeReport::Regime::GroupDelay
               : r.rho > 3.0      ? RegimeReport::Regime::DampedRabi
                                  : RegimeReport::Regime::Hybrid;
    return r;
}

// Diagnostic mass split of the rate surface around the tau31 = tau32
// diagonal, plus the fraction inside a three-cell band.
struct DiagonalMetric {
    double frac_above = 0.0;  // tau31 > tau32
    double frac_below = 0.0;  // tau31 < tau32
    double band_frac = 0.0;   // |tau31 - tau32| within three cells
};

inline DiagonalMetric diagonal_support_metric(const CorrelationSurface& s) {
    long double above = 0.0L, below = 0.0L, band = 0.0L, total = 0.0L;
    const double bw = 3.0 * std::max(s.dtau1, s.dtau2);
    for (int i = 0; i < s.n1; ++i) {
        const double t1 = s.tau1[std::size_t(i)];
        for (int j = 0; j < s.n2; ++j) {
            const double t2 = s.tau2[std::size_t(j)];
            const long double v = s.at(i, j);
            total += v;
            if (t1 > t2) above += v;
            if (t1 < t2) below += v;
            if (std::abs(t1 - t2) <= bw) band += v;
        }
    }
    DiagonalMetric m;
    if (total > 0.0L) {
        m.frac_above = double(above / total);
        m.frac_below = double(below / total);
        m.band_frac = double(band / total);
    }
    return m;
}

// Largest boundary magnitude relative to the field peak. Values above
// leakage_warn_level mean the lattice truncates the kernel and the delay
// transform will ring; widen the spans.
inline constexpr double leakage_warn_level = 1e-3;

inline double edge_leakage(const SpectralField2D& f) {
    const int n1 = f.grid.n1, n2 = f.grid.n2;
    double gmax = 0.0;
    for (const auto& v : f.values) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) return 0.0;
    double edge = 0.0;
    for (int j = 0; j < n2; ++j) {
        edge = std::max(edge, std::abs(f.at(0, j)));
        edge = std::max(edge, std::abs(f.at(n1 - 1, j)));
    }
    for (int i = 0; i < n1; ++i) {
        edge = std::max(edge, std::abs(f.at(i, 0)));
        edge = std::max(edge, std::abs(f.at(i, n2 - 1)));
    }
    return edge / gmax;
}

// Deterministic probe draw for the quadrature cross-check: lattice points
// whose rate sits at or above `floor` of the peak, thinned to `count` by a
// fixed-seed generator.
inline std::vector<std::pair<double, double>> draw_probe_points(const Amplitude3& A, int count,
                                                                double floor_frac = 0.1,
                                                                unsigned seed = 12345) {
    double m2 = 0.0;
    for (const auto& v : A.a) m2 = std::max(m2, std::norm(v));
    if (m2 == 0.0) throw PreconditionError("amplitude surface is identically zero");
    const double cut = floor_frac * floor_frac * m2;  // compare on |A|^2
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < A.a.size(); ++k)
        if (std::norm(A.a[k]) >= cut) idx.push_back(k);
    std::mt19937 rng(seed);
    std::vector<std::pair<double, double>> pts;
    const int want = std::min<int>(count, int(idx.size()));
    for (int k = 0; k < want; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
        const std::size_t chosen = idx[pick(rng)];
        pts.emplace_back(A.tau1[chosen / std::size_t(A.n2)], A.tau2[chosen % std::size_t(A.n2)]);
    }
    return pts;
}

}
