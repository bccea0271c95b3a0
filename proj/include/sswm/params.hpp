#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace sswm {

inline constexpr double c_light = 299792458.0;  // m/s

// Five-level ladder-plus-lambda system driven by one weak pump and two strong
// couplings. Levels are numbered 1..5 with 1 the ground state; gamma_ij is
// the coherence decay rate of the ij transition.
//
// Every rate, detuning and Rabi frequency is stored in units of gamma_31
// (so gamma_31 == 1 in all shipped presets). gamma31_si anchors the unit:
// one internal frequency unit equals gamma31_si / gamma_31 rad/s. Lengths
// are meters; central_freq_s3 (the generated field's carrier) and k_offset
// stay in SI.
struct SystemParams {
    double gamma_21 = 0.04;
    double gamma_31 = 1.0;
    double gamma_32 = 0.52;
    double gamma_41 = 1.0;
    double gamma_42 = 0.52;
    double gamma_43 = 1.0;
    double gamma_51 = 0.2;
    double gamma_52 = 0.12;
    double gamma_53 = 0.6;
    double gamma_54 = 0.6;

    double delta_p = -100.0;   // pump detuning
    double delta_c1 = 0.0;     // first coupling detuning
    double delta_c2 = 0.0;     // second coupling detuning

    std::complex<double> omega_c1 = 20.0;  // coupling Rabi frequencies
    std::complex<double> omega_c2 = 20.0;

    double length_L = 0.015;         // medium length, m
    double optical_depth = 1.5;
    double central_freq_s3 = 2.42e15;  // rad/s
    double k_offset = 0.0;             // residual geometric mismatch, 1/m

    double gamma31_si = 2.0 * M_PI * 3.0e6;  // rad/s value of gamma_31

    // model switches, all off in the shipped presets
    double chi5_prefactor = 1.0;   // overall scale of the fifth-order response
    bool chi5_unconjugated = false;  // drop the output-channel conjugation
    bool halve_absorption = false;   // amplitude-style absorption in delta_k
    bool literal_omega_tr = false;   // first-power transparency scaling variant

    // rad/s carried by one internal frequency unit
    double si_per_unit() const { return gamma31_si / gamma_31; }
};

// Coherence decays not fixed by the four radiative rates default to the mean
// of the two decay rates toward ground; the ground coherence contributes 0.
inline void derive_dephasings(SystemParams& p) {
    p.gamma_32 = 0.5 * (p.gamma_31 + p.gamma_21);
    p.gamma_42 = 0.5 * (p.gamma_41 + p.gamma_21);
    p.gamma_43 = 0.5 * (p.gamma_41 + p.gamma_31);
    p.gamma_52 = 0.5 * (p.gamma_51 + p.gamma_21);
    p.gamma_53 = 0.5 * (p.gamma_51 + p.gamma_31);
    p.gamma_54 = 0.5 * (p.gamma_51 + p.gamma_41);
}

inline void validate(const SystemParams& p) {
    auto finite = [](double v) { return std::isfinite(v); };
    const double rates[] = {p.gamma_21, p.gamma_31, p.gamma_32, p.gamma_41, p.gamma_42,
                            p.gamma_43, p.gamma_51, p.gamma_52, p.gamma_53, p.gamma_54};
    for (double r : rates)
        if (!finite(r) || r < 0.0)
            throw PreconditionError("coherence decay rates must be finite and nonnegative");
    if (!(p.gamma_31 > 0.0))
        throw PreconditionError("gamma_31 anchors the unit system and must be positive");
    if (!finite(p.delta_p) || !finite(p.delta_c1) || !finite(p.delta_c2))
        throw PreconditionError("detunings must be finite");
    if (!finite(p.omega_c1.real()) || !finite(p.omega_c1.imag()) ||
        !finite(p.omega_c2.real()) || !finite(p.omega_c2.imag()))
        throw PreconditionError("coupling Rabi frequencies must be finite");
    if (!(p.length_L > 0.0))
        throw PreconditionError("medium length must be positive");
    if (!finite(p.optical_depth) || p.optical_depth < 0.0)
        throw PreconditionError("optical depth must be finite and nonnegative");
    if (!(p.central_freq_s3 > 0.0))
        throw PreconditionError("central_freq_s3 must be positive");
    if (!finite(p.k_offset))
        throw PreconditionError("k_offset must be finite");
    if (!(p.gamma31_si > 0.0))
        throw PreconditionError("gamma31_si must be positive");
    if (!finite(p.chi5_prefactor))
        throw PreconditionError("chi5_prefactor must be finite");
}

// Dimensional strength of the linear response, rad/s:
//   alpha3 = OD * c * gamma31 / (2 L omega_s3)
// The optical depth fixes resonant absorption, so the susceptibility scale
// follows from OD, the medium length and the carrier frequency.
inline double alpha3(const SystemParams& p) {
    return p.optical_depth * c_light * p.gamma31_si / (2.0 * p.length_L * p.central_freq_s3);
}

// Same constant expressed in internal frequency units.
inline double alpha3_internal(const SystemParams& p) {
    return alpha3(p) / p.si_per_unit();
}

struct Preset {
    std::string name;
    SystemParams params;
    FrequencyGrid2D grid;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "fig2a", "fig2b", "fig3a", "fig3c", "fig3e",
        "figS2a", "figS2b", "figS2c", "figS2d", "figS2e", "figS2f",
        "figS3"};
    return names;
}

// Named parameter sets with grids wide and fine enough for their features.
// All share the radiative rates, the pump detuning and the cell geometry;
// they differ in coupling strengths, coupling detuning and optical depth.
inline Preset load_preset(const std::string& name) {
    Preset ps;
    ps.name = name;
    SystemParams& p = ps.params;
    derive_dephasings(p);

    auto grid = [&ps](double c1, double s1, int n1, double c2, double s2, int n2) {
        ps.grid = FrequencyGrid2D{c1, s1, n1, c2, s2, n2};
    };

    if (name == "fig2a") {
        p.omega_c1 = 20.0;
        p.omega_c2 = 20.0;
        grid(-100.0, 80.0, 512, 100.0, 120.0, 512);
    } else if (name == "fig2b") {
        p.omega_c1 = 10.0;
        p.omega_c2 = 50.0;
        p.delta_c1 = 100.0;
        grid(-50.0, 220.0, 2048, 50.0, 280.0, 2048);
    } else if (name == "fig3a") {
        p.omega_c1 = 5.0;
        p.omega_c2 = 5.0;
        grid(-100.0, 160.0, 1024, 100.0, 160.0, 1024);
    } else if (name == "fig3c") {
        p.omega_c1 = 1.6;
        p.omega_c2 = 1.6;
        p.optical_depth = 88.0;
        grid(-100.0, 72.0, 4096, 100.0, 72.0, 4096);
    } else if (name == "fig3e") {
        p.omega_c1 = 1.6;
        p.omega_c2 = 1.6;
        p.optical_depth = 8.0;
        grid(-100.0, 72.0, 2048, 100.0, 72.0, 2048);
    } else if (name == "figS2a") {
        p.omega_c1 = 5.0;
        p.omega_c2 = 5.0;
        grid(-100.0, 40.0, 512, 100.0, 40.0, 512);
    } else if (name == "figS2b") {
        p.omega_c1 = 5.0;
        p.omega_c2 = 50.0;
        grid(-100.0, 40.0, 512, 100.0, 140.0, 1024);
    } else if (name == "figS2c") {
        p.omega_c1 = 50.0;
        p.omega_c2 = 5.0;
        grid(-100.0, 140.0, 1024, 100.0, 140.0, 1024);
    } else if (name == "figS2d") {
        p.omega_c1 = 5.0;
        p.omega_c2 = 5.0;
        p.delta_c1 = 100.0;
        grid(-50.0, 140.0, 1024, 50.0, 140.0, 1024);
    } else if (name == "figS2e") {
        p.omega_c1 = 5.0;
        p.omega_c2 = 50.0;
        p.delta_c1 = 100.0;
        grid(-50.0, 140.0, 1024, 50.0, 240.0, 2048);
    } else if (name == "figS2f") {
        p.omega_c1 = 50.0;
        p.omega_c2 = 5.0;
        p.delta_c1 = 100.0;
        grid(-50.0, 220.0, 2048, 50.0, 220.0, 2048);
    } else if (name == "figS3") {
        p.omega_c1 = 10.0;
        p.omega_c2 = 50.0;
        p.delta_c1 = 100.0;
        grid(-50.0, 320.0, 2048, 50.0, 360.0, 2048);
    } else {
        std::string msg = "unknown preset '" + name + "'; available:";
        for (const auto& n : preset_names()) msg += " " + n;
        throw ConfigError(msg);
    }
    return ps;
}

}
