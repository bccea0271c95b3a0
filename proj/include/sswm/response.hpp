#pragma once

#include <algorithm>
#include <complex>

#include "params.hpp"

namespace sswm {

using cd = std::complex<double>;

// Complex denominators of the steady-state coherence chain at two-photon
// detuning s = nu1 + nu2 and idler detuning nu1. Gamma_ij are the bare
// single-coherence factors i*delta - gamma, the F_ij carry the running
// detunings, Pi_ij shift Gamma_ij by -i*nu1. D is the doubly dressed
// four-factor denominator and Xi its nu1-independent sibling.
struct DressingDenominators {
    cd Gamma_41, Gamma_51, Gamma_54, Gamma_32;
    cd F_21, F_31, F_42, F_43, F_52, F_53;
    cd Pi_41, Pi_51;
    cd D;
    cd Xi;
};

inline DressingDenominators dressing(const SystemParams& p, double nu1, double nu2) {
    const double s = nu1 + nu2;
    const double W1 = std::norm(p.omega_c1);
    const double W2 = std::norm(p.omega_c2);
    DressingDenominators d;
    d.Gamma_41 = cd(-p.gamma_41, p.delta_p);
    d.Gamma_51 = cd(-p.gamma_51, p.delta_p + p.delta_c1);
    d.Gamma_54 = cd(-p.gamma_54, p.delta_c1);
    d.Gamma_32 = cd(-p.gamma_32, p.delta_c2);
    d.F_21 = cd(-p.gamma_21, -s);
    d.F_31 = cd(-p.gamma_31, p.delta_c2 - s);
    d.F_42 = cd(-p.gamma_42, p.delta_p + nu2);
    d.F_43 = cd(-p.gamma_43, p.delta_p + nu2 - p.delta_c2);
    d.F_52 = cd(-p.gamma_52, p.delta_p + p.delta_c1 + nu2);
    d.F_53 = cd(-p.gamma_53, p.delta_p + p.delta_c1 + nu2 - p.delta_c2);
    d.Pi_41 = d.Gamma_41 - cd(0.0, nu1);
    d.Pi_51 = d.Gamma_51 - cd(0.0, nu1);
    d.D = (d.Pi_41 * d.Pi_51 + W1) * (d.F_21 * d.F_31 + W2);
    d.Xi = d.Gamma_41 * d.Gamma_51 + W1;
    return d;
}

// Linear susceptibility seen by the generated field. Depends on the
// detunings only through s = nu1 + nu2; the second coupling opens the
// transparency window.
inline cd chi_s3_he(const SystemParams& p, double nu1, double nu2) {
    const double s = nu1 + nu2;
    const double W2 = std::norm(p.omega_c2);
    const cd f21(-p.gamma_21, -s);
    const cd f31(-p.gamma_31, p.delta_c2 - s);
    const cd num = std::conj(f21);
    const cd den = std::conj(f31) * std::conj(f21) + W2;
    return cd(0.0, -alpha3_internal(p)) * num / den;
}

// Fifth-order susceptibility of the triphoton process, doubly dressed by
// both couplings. chi5_prefactor scales it; chi5_unconjugated keeps the
// bare coherence denominators instead of the emission-channel conjugates.
inline cd chi5_he(const SystemParams& p, double nu1, double nu2) {
    const DressingDenominators d = dressing(p, nu1, nu2);
    const cd base = p.chi5_unconjugated
                        ? cd(0.0, -1.0) * d.Pi_51 / (d.Xi * d.D)
                        : cd(0.0, -1.0) * std::conj(d.Pi_51) / (std::conj(d.Xi) * std::conj(d.D));
    return p.chi5_prefactor * base;
}

// Single-variable linear responses of the three emission channels, written
// directly from the per-channel coherence chains. Shared strength alpha3.
inline cd chi_s1_pcr(const SystemParams& p, double nu1) {
    const double W1 = std::norm(p.omega_c1);
    const cd t(nu1, p.gamma_54);
    return cd(0.0, -alpha3_internal(p)) * t / ((cd(p.delta_c1, 0.0) + t) * t + W1);
}

inline cd chi_s2_pcr(const SystemParams& p, double nu2) {
    const double W2 = std::norm(p.omega_c2);
    const cd u32(p.delta_p + nu2, p.gamma_32);
    const cd u42(p.delta_p + nu2, p.gamma_42);
    return cd(0.0, -alpha3_internal(p)) * u32 / (u42 * u32 + W2);
}

inline cd chi_s3_pcr(const SystemParams& p, double nu3) {
    const double W2 = std::norm(p.omega_c2);
    const cd n(-p.gamma_21, -nu3);
    const cd m(-p.gamma_31, -(nu3 + p.delta_c2));
    return cd(0.0, -alpha3_internal(p)) * n / (m * n + W2);
}

// Per-channel fifth-order responses (unit strength). Each factors the
// process into the coherence chain seen from one emission channel; they
// share resonance positions with chi5_he but not detailed lineshapes.
inline cd chi5_pcr_s3(const SystemParams& p, double nu1, double nu2) {
    const DressingDenominators d = dressing(p, nu1, nu2);
    const double W2 = std::norm(p.omega_c2);
    return cd(0.0, -1.0) / (d.Xi * d.Gamma_41 * (d.F_21 * d.F_31 + W2));
}

inline cd chi5_pcr_s2(const SystemParams& p, double nu1, double nu2) {
    const double W1 = std::norm(p.omega_c1);
    const double W2 = std::norm(p.omega_c2);
    const double s = nu1 + nu2;
    // population decay of level 2 is not resolved separately from its
    // ground coherence decay
    const double g22 = p.gamma_21;
    const double pi0 = p.gamma_32 * g22 + W2;
    const cd t1(-p.gamma_21, s);
    const cd t2 = cd(-p.gamma_41, p.delta_p + s) * cd(-p.gamma_51, p.delta_p + p.delta_c1 + s) + W1;
    const cd t3(-p.gamma_41, p.delta_p + nu2);
    return cd(0.0, -g22) / (pi0 * t1 * t2 * t3);
}

inline cd chi5_pcr_s1(const SystemParams& p, double nu1, double nu2) {
    const double W1 = std::norm(p.omega_c1);
    const double W2 = std::norm(p.omega_c2);
    // level-4 population decay folded into gamma_41
    const double g44 = p.gamma_41;
    const cd b1 = cd(-p.gamma_42, -(p.delta_p + nu2)) * cd(-p.gamma_43, -(p.delta_p + nu2)) + W2;
    const cd b2(-p.gamma_41, nu1 - p.delta_p);
    const cd b3 = cd(-g44, nu1) * cd(-p.gamma_54, nu1 + p.delta_c1) + W1;
    return cd(0.0, -1.0) / (b1 * b2 * b3);
}

// Dense sweep over the two-photon axis asserting the medium never shows
// gain: Im chi_s3 must stay nonnegative everywhere (a tiny rounding
// allowance scaled by the response strength). A violation means the
// absorption orientation of the propagation phase would amplify instead
// of attenuate, which invalidates every downstream result.
inline void check_absorption_orientation(const SystemParams& p, int n = 4096) {
    const double reach = 8.0 * std::max({std::abs(p.omega_c2), p.gamma_31, std::abs(p.delta_c2) + 1.0});
    const double floor_tol = -1e-12 * alpha3_internal(p);
    for (int k = 0; k <= n; ++k) {
        const double s = -reach + 2.0 * reach * k / n;
        if (std::imag(chi_s3_he(p, s, 0.0)) < floor_tol)
            throw InvariantError("sign convention violated: linear response shows gain at s = " +
                                 std::to_string(s));
    }
}

}
