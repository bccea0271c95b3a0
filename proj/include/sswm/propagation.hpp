#pragma once

#include <cmath>
#include <complex>

#include "response.hpp"

namespace sswm {

// Longitudinal phase-matching profile sinc(x) e^{-ix}. Magnitude is bounded
// by 1 whenever Im x <= 0, which the absorption orientation of delta_k
// guarantees. Below |x| = 1e-6 the sinc switches to its even series so the
// removable singularity stays smooth to machine precision.
inline cd phi(cd x) {
    cd s;
    if (std::abs(x) < 1e-6) {
        const cd x2 = x * x;
        s = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    } else {
        s = std::sin(x) / x;
    }
    return s * std::exp(cd(0.0, -1.0) * x);
}

// Slow-light figures of the generated field, all SI.
struct EitMetrics {
    double v3 = 0.0;        // group velocity, m/s
    double omega_tr = 0.0;  // transparency bandwidth, rad/s
    double delay = 0.0;     // group delay through the cell, s
};

inline EitMetrics eit_metrics(const SystemParams& p) {
    if (!(p.optical_depth > 0.0))
        throw PreconditionError("slow-light metrics need a positive optical depth");
    const double w2 = std::abs(p.omega_c2);
    if (w2 == 0.0)
        throw PreconditionError("slow-light metrics need a nonzero omega_c2");
    const double si = p.si_per_unit();
    const double w2_si = w2 * si;
    const double g31_si = p.gamma_31 * si;
    EitMetrics m;
    m.v3 = w2_si * w2_si * p.length_L / (g31_si * p.optical_depth);
    const double root = std::sqrt(8.0 * p.optical_depth);
    // the default scaling carries the coupling intensity; the literal
    // variant keeps only its first power (and is left dimensionless)
    m.omega_tr = p.literal_omega_tr ? w2 / (p.gamma_31 * root)
                                    : w2 * w2 / (p.gamma_31 * root) * si;
    m.delay = p.length_L / m.v3;
    return m;
}

// Complex longitudinal mismatch of the three generated waves, 1/m. The real
// part is a geometric offset minus the slow-light dispersion of the two-photon
// detuning; the imaginary part converts Im chi_s3 into attenuation (negative
// imaginary part, so exp(i delta_k z) decays). halve_absorption reduces the
// loss to its amplitude convention.
inline cd delta_k(const SystemParams& p, double nu1, double nu2) {
    const EitMetrics m = eit_metrics(p);
    const double s_si = (nu1 + nu2) * p.si_per_unit();
    double im = std::imag(chi_s3_he(p, nu1, nu2));
    if (p.halve_absorption) im *= 0.5;
    return cd(p.k_offset - s_si / m.v3, -p.central_freq_s3 * im / c_light);
}

// Spectral generation kernel: the fifth-order response filtered by the
// phase-matching profile across the cell.
inline cd kernel(const SystemParams& p, double nu1, double nu2) {
    return chi5_he(p, nu1, nu2) * phi(delta_k(p, nu1, nu2) * (p.length_L / 2.0));
}

// Intensity transmission of the phase-matching envelope at two-photon
// detuning s (nu2 held at 0, so s rides on nu1).
inline double transmission(const SystemParams& p, double s) {
    return std::exp(2.0 * std::imag(delta_k(p, s, 0.0) * (p.length_L / 2.0)));
}

// Full width of the central transparency window at half transmission.
// Scans outward for the absorption dip flanking the window, then bisects
// the crossing. Symmetric about s = 0 for delta_c2 = 0.
inline double transparency_width(const SystemParams& p) {
    if (transmission(p, 0.0) <= 0.5)
        throw PreconditionError("no transparency window: center transmission is at or below one half");
    const double reach = 3.0 * std::max(std::abs(p.omega_c2), p.gamma_31);
    const int n = 20000;
    double dip = 0.0;
    double tmin = 1.0;
    for (int k = 1; k <= n; ++k) {
        const double s = reach * k / n;
        const double t = transmission(p, s);
        if (t < tmin) {
            tmin = t;
            dip = s;
        }
    }
    if (tmin > 0.5)
        throw PreconditionError("no absorption dip below one half within the scanned band; "
                                "the window has no measurable edge");
    double lo = 0.0, hi = dip;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (transmission(p, mid) > 0.5 ? lo : hi) = mid;
    }
    return 2.0 * lo;
}

}
