#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "propagation.hpp"

namespace sswm {

enum class Quantity { chi_s3, chi5_he, chi5_pcr_s1, chi5_pcr_s2, chi5_pcr_s3, kernel };

inline const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::chi_s3: return "chi_s3";
        case Quantity::chi5_he: return "chi5_he";
        case Quantity::chi5_pcr_s1: return "chi5_pcr_s1";
        case Quantity::chi5_pcr_s2: return "chi5_pcr_s2";
        case Quantity::chi5_pcr_s3: return "chi5_pcr_s3";
        case Quantity::kernel: return "kernel";
    }
    return "?";
}

inline Quantity parse_quantity(const std::string& s) {
    if (s == "chi_s3") return Quantity::chi_s3;
    if (s == "chi5_he") return Quantity::chi5_he;
    if (s == "chi5_pcr_s1") return Quantity::chi5_pcr_s1;
    if (s == "chi5_pcr_s2") return Quantity::chi5_pcr_s2;
    if (s == "chi5_pcr_s3") return Quantity::chi5_pcr_s3;
    if (s == "kernel") return Quantity::kernel;
    throw ConfigError("unknown quantity '" + s +
                      "'; available: chi_s3 chi5_he chi5_pcr_s1 chi5_pcr_s2 chi5_pcr_s3 kernel");
}

inline bool is_chi5_kind(Quantity q) {
    return q == Quantity::chi5_he || q == Quantity::chi5_pcr_s1 ||
           q == Quantity::chi5_pcr_s2 || q == Quantity::chi5_pcr_s3;
}

// Half-sum linewidths of the two dressed doublets.
inline double gamma_e1(const SystemParams& p) { return 0.5 * (p.gamma_41 + p.gamma_51); }
inline double gamma_e2(const SystemParams& p) { return 0.5 * (p.gamma_21 + p.gamma_31); }

// Closed-form resonance geometry of the doubly dressed response: splitting
// frequencies, effective linewidths, the nu1 doublet, and the four pathway
// triples (nu1, nu2, nu3). Each triple sums to zero by construction (nu3 is
// literally -(nu1 + nu2)).
struct ResonancePrediction {
    double omega_e1 = 0.0, omega_e2 = 0.0;
    double gamma_e1 = 0.0, gamma_e2 = 0.0;
    double nu1_peaks[2] = {0.0, 0.0};
    double nu2_peaks[4] = {0.0, 0.0, 0.0, 0.0};
    double pathways[4][3] = {};
};

inline ResonancePrediction predicted_resonances(const SystemParams& p) {
    const double W1 = std::norm(p.omega_c1);
    const double W2 = std::norm(p.omega_c2);
    const double d1 = p.gamma_41 - p.gamma_51;
    const double d2 = p.gamma_31 - p.gamma_21;
    const double r1 = 4.0 * W1 - d1 * d1;
    const double r2 = 4.0 * W2 - d2 * d2;
    if (r1 <= 0.0 || r2 <= 0.0)
        throw PreconditionError("overdamped dressing: a coupling is too weak to split its "
                                "doublet, so no oscillatory resonances exist to predict");
    ResonancePrediction r;
    r.omega_e1 = std::sqrt(r1);
    r.omega_e2 = std::sqrt(r2);
    r.gamma_e1 = gamma_e1(p);
    r.gamma_e2 = gamma_e2(p);
    r.nu1_peaks[0] = p.delta_p + 0.5 * r.omega_e1;
    r.nu1_peaks[1] = p.delta_p - 0.5 * r.omega_e1;
    int k = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double nu1 = r.nu1_peaks[a];
            const double s = (b == 0 ? 0.5 : -0.5) * r.omega_e2;
            const double nu2 = s - nu1;
            r.pathways[k][0] = nu1;
            r.pathways[k][1] = nu2;
            r.pathways[k][2] = -(nu1 + nu2);
            r.nu2_peaks[k] = nu2;
            ++k;
        }
    }
    return r;
}

// A sampled complex response surface. min_linewidth records the finest
// predicted feature scale at evaluation time; the peak finder refuses grids
// whose spacing cannot resolve it.
struct SpectralField2D {
    FrequencyGrid2D grid;
    Quantity quantity = Quantity::chi5_he;
    double min_linewidth = 0.0;
    std::vector<std::complex<double>> values;  // row major, n1 x n2

    std::complex<double>& at(int i, int j) { return values[std::size_t(i) * grid.n2 + j]; }
    const std::complex<double>& at(int i, int j) const {
        return values[std::size_t(i) * grid.n2 + j];
    }
};

inline constexpr std::size_t default_max_points = std::size_t(1) << 26;

// Fills the lattice row by row in parallel (disjoint writes, no reductions,
// so the result is independent of the thread count), then rejects any
// non-finite sample.
inline SpectralField2D evaluate(Quantity q, const SystemParams& p, const FrequencyGrid2D& g,
                                int threads = 0, std::size_t max_points = default_max_points) {
    validate(p);
    validate(g);
    if (g.points() > max_points)
        throw PreconditionError("grid has " + std::to_string(g.points()) +
                                " points, above the cap of " + std::to_string(max_points));
    if (q == Quantity::kernel)
        eit_metrics(p);  // surface slow-light precondition failures before the parallel fill

    SpectralField2D f;
    f.grid = g;
    f.quantity = q;
    f.min_linewidth = std::min(gamma_e1(p), gamma_e2(p));
    f.values.resize(g.points());

    parallel_for(0, std::size_t(g.n1), [&](std::size_t i) {
        const double nu1 = g.nu1(int(i));
        std::complex<double>* row = f.values.data() + i * std::size_t(g.n2);
        for (int j = 0; j < g.n2; ++j) {
            const double nu2 = g.nu2(j);
            switch (q) {
                case Quantity::chi_s3: row[j] = chi_s3_he(p, nu1, nu2); break;
                case Quantity::chi5_he: row[j] = chi5_he(p, nu1, nu2); break;
                case Quantity::chi5_pcr_s1: row[j] = chi5_pcr_s1(p, nu1, nu2); break;
                case Quantity::chi5_pcr_s2: row[j] = chi5_pcr_s2(p, nu1, nu2); break;
                case Quantity::chi5_pcr_s3: row[j] = chi5_pcr_s3(p, nu1, nu2); break;
                case Quantity::kernel: row[j] = kernel(p, nu1, nu2); break;
            }
        }
    }, threads);

    for (const auto& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvariantError("non-finite sample in evaluated field");
    return f;
}

struct Peak {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double magnitude = 0.0;
};

// Strict 8-neighbor local maxima of |field| above threshold * global max,
// interior points only, sorted by magnitude (ties by position). The guard
// requires the grid to place at least two cells per half linewidth of the
// finest predicted feature; a coarser lattice aliases peak positions.
inline std::vector<Peak> find_peaks(const SpectralField2D& f, double threshold = 0.5) {
    const FrequencyGrid2D& g = f.grid;
    const double lim = 0.5 * f.min_linewidth;
    if (!(g.dnu1() < lim && g.dnu2() < lim))
        throw PreconditionError("grid too coarse for peak detection: cell " +
                                std::to_string(g.dnu1()) + " x " + std::to_string(g.dnu2()) +
                                " but features need spacing below " + std::to_string(lim));
    double gmax = 0.0;
    for (const auto& v : f.values) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) return {};

    std::vector<Peak> peaks;
    const double cut = threshold * gmax;
    for (int i = 1; i + 1 < g.n1; ++i) {
        for (int j = 1; j + 1 < g.n2; ++j) {
            const double m = std::abs(f.at(i, j));
            if (m < cut) continue;
            bool top = true;
            for (int a = -1; a <= 1 && top; ++a)
                for (int b = -1; b <= 1 && top; ++b) {
                    if (a == 0 && b == 0) continue;
                    if (std::abs(f.at(i + a, j + b)) >= m) top = false;
                }
            if (top) peaks.push_back({g.nu1(i), g.nu2(j), m});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
        if (a.nu1 != b.nu1) return a.nu1 < b.nu1;
        return a.nu2 < b.nu2;
    });
    return peaks;
}

// Magnitude at fractional lattice coordinates by bilinear interpolation.
inline double bilinear_abs(const SpectralField2D& f, double x, double y) {
    const int n1 = f.grid.n1, n2 = f.grid.n2;
    const int i0 = std::clamp(int(std::floor(x)), 0, n1 - 2);
    const int j0 = std::clamp(int(std::floor(y)), 0, n2 - 2);
    const double tx = x - i0, ty = y - j0;
    const double m00 = std::abs(f.at(i0, j0));
    const double m10 = std::abs(f.at(i0 + 1, j0));
    const double m01 = std::abs(f.at(i0, j0 + 1));
    const double m11 = std::abs(f.at(i0 + 1, j0 + 1));
    return (1 - tx) * (1 - ty) * m00 + tx * (1 - ty) * m10 + (1 - tx) * ty * m01 + tx * ty * m11;
}

// Largest normalized magnitude mismatch between the field and its reflection
// through the detected peak centroid. Only samples whose mirror image lands
// inside the grid participate. center_out (4 doubles, optional) receives the
// centroid and the analytic center (delta_p, -delta_p + s_shift) alongside.
inline double central_symmetry_residual(const SpectralField2D& f, double* center_out = nullptr) {
    if (!is_chi5_kind(f.quantity))
        throw InvariantError("central symmetry is defined for fifth-order surfaces, got " +
                             std::string(to_string(f.quantity)));
    const std::vector<Peak> peaks = find_peaks(f, 0.5);
    if (peaks.empty())
        throw PreconditionError("no peaks above half maximum; cannot locate a symmetry center");
    double c1 = 0.0, c2 = 0.0;
    for (const auto& pk : peaks) {
        c1 += pk.nu1;
        c2 += pk.nu2;
    }
    c1 /= double(peaks.size());
    c2 /= double(peaks.size());
    if (center_out) {
        center_out[0] = c1;
        center_out[1] = c2;
    }
    const FrequencyGrid2D& g = f.grid;
    double gmax = 0.0;
    for (const auto& v : f.values) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) return 0.0;
    // lattice coordinates of the center
    const double ci = (c1 - g.nu1_min()) / g.dnu1();
    const double cj = (c2 - g.nu2_min()) / g.dnu2();
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        const double ri = 2.0 * ci - i;
        if (ri < 0.0 || ri > g.n1 - 1) continue;
        for (int j = 0; j < g.n2; ++j) {
            const double rj = 2.0 * cj - j;
            if (rj < 0.0 || rj > g.n2 - 1) continue;
            const double d = std::abs(std::abs(f.at(i, j)) - bilinear_abs(f, ri, rj));
            if (d > worst) worst = d;
        }
    }
    return worst / gmax;
}

// 1D sweep of the linear response against nu3 = -(nu1 + nu2); re/im expose
// the dispersion and the transparency dip.
struct EitLandscape {
    std::vector<double> nu3;
    std::vector<double> re, im;
};

inline EitLandscape eit_landscape(const SystemParams& p, double center, double span, int n) {
    if (n < 2) throw PreconditionError("landscape needs at least 2 samples");
    const double need = 6.0 * std::abs(p.omega_c2);
    if (!(span >= need))
        throw PreconditionError("landscape span " + std::to_string(span) +
                                " too narrow to contain the dressed doublet; need >= " +
                                std::to_string(need));
    EitLandscape out;
    out.nu3.resize(std::size_t(n));
    out.re.resize(std::size_t(n));
    out.im.resize(std::size_t(n));
    for (int k = 0; k < n; ++k) {
        const double nu3 = center + (k - n / 2) * (span / n);
        const cd v = chi_s3_he(p, -nu3, 0.0);
        out.nu3[std::size_t(k)] = nu3;
        out.re[std::size_t(k)] = v.real();
        out.im[std::size_t(k)] = v.imag();
    }
    return out;
}

// Default lattice for parameter sets without a curated grid: centered on the
// dressed doublets, spanning every predicted pathway with a margin of ten
// effective linewidths on each side.
inline FrequencyGrid2D auto_grid(const SystemParams& p, int n1 = 512, int n2 = 512) {
    const ResonancePrediction r = predicted_resonances(p);
    const double margin = 10.0 * std::max(r.gamma_e1, r.gamma_e2);
    // a detuned first coupling splits the nu1 structure across delta_c1
    const double spread = std::abs(p.delta_c1);
    FrequencyGrid2D g;
    g.nu1_center = p.delta_p + 0.5 * p.delta_c1;
    g.nu1_span = spread + r.omega_e1 + 2.0 * margin;
    g.nu2_center = -g.nu1_center;
    g.nu2_span = spread + r.omega_e1 + r.omega_e2 + 2.0 * margin;
    g.n1 = n1;
    g.n2 = n2;
    return g;
}

}
