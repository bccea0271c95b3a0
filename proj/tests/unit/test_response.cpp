#include <catch2/catch_amalgamated.hpp>

#include <sswm/params.hpp>
#include <sswm/response.hpp>

#include "oracles.hpp"

using namespace sswm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemParams base_params() { return load_preset("fig2a").params; }

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("dressing factors at a reference point") {
    const SystemParams p = base_params();
    const DressingDenominators d = dressing(p, -80.0, 100.0);

    CHECK(d.F_21 == cd(-0.04, -20.0));
    CHECK(d.F_31 == cd(-1.0, -20.0));
    CHECK(d.Pi_41 == cd(-1.0, -20.0));
    CHECK(d.Pi_51 == cd(-0.2, -20.0));
    CHECK(d.Gamma_41 == cd(-1.0, -100.0));
    CHECK(d.Gamma_51 == cd(-0.2, -100.0));
    CHECK_THAT(d.D.real(), WithinRel(-499.192, 1e-13));
    CHECK_THAT(d.D.imag(), WithinRel(5.12, 1e-13));
    CHECK_THAT(d.Xi.real(), WithinRel(-9599.8, 1e-13));
    CHECK_THAT(d.Xi.imag(), WithinRel(120.0, 1e-13));
}

TEST_CASE("switching off the first coupling collapses the dressed factors") {
    SystemParams p = base_params();
    p.omega_c1 = 0.0;
    const DressingDenominators d = dressing(p, -77.0, 103.5);
    CHECK(d.D == d.Pi_41 * d.Pi_51 * (d.F_21 * d.F_31 + std::norm(p.omega_c2)));
    CHECK(d.Xi == d.Gamma_41 * d.Gamma_51);
}

TEST_CASE("linear response against exact rational arithmetic") {
    const SystemParams p = base_params();

    const oracle::Q alpha = oracle::from_decimal("1.5") * oracle::from_decimal("299792458") /
                            (oracle::Q(2) * oracle::from_decimal("0.015") *
                             oracle::from_decimal("2.42e15"));
    // s = 20 at the probe (-80, 100)
    const oracle::QC f21 = oracle::qc("-0.04", "-20");
    const oracle::QC f31 = oracle::qc("-1", "-20");
    const oracle::QC num = oracle::conj(f21);
    const oracle::QC den = oracle::conj(f31) * oracle::conj(f21) + oracle::QC(400);
    const oracle::QC val = oracle::QC(oracle::Q(0), -alpha) * num / den;

    const cd got = chi_s3_he(p, -80.0, 100.0);
    CHECK(rel(got, val.value()) < 1e-12);
    CHECK(rel(got, cd(-4.5813876794150628e-10, 5.9558268902541477e-06)) < 1e-12);
}

TEST_CASE("linear response frozen probes and structure") {
    const SystemParams p = base_params();

    // depends on nu1, nu2 only through the sum
    CHECK(chi_s3_he(p, 10.0, 10.0) == chi_s3_he(p, -80.0, 100.0));
    CHECK(rel(chi_s3_he(p, -37.25, 41.5), chi_s3_he(p, 0.0, 4.25)) < 1e-14);

    const cd at_zero = chi_s3_he(p, -100.0, 100.0);
    CHECK(at_zero.real() == 0.0);
    CHECK_THAT(at_zero.imag(), WithinRel(6.1934397056162147e-10, 1e-12));

    CHECK(rel(chi_s3_he(p, -103.0, 97.0),
              cd(-1.0204700718255197e-07, 2.4297760872502895e-09)) < 1e-12);
}

TEST_CASE("perfect ground coherence gives an exact transparency null") {
    SystemParams p = base_params();
    p.gamma_21 = 0.0;
    for (double nu : {3.0, -41.5, 100.0, 0.25})
        CHECK(std::abs(chi_s3_he(p, nu, -nu)) == 0.0);
}

TEST_CASE("without the second coupling the linear response is a bare line") {
    SystemParams p = base_params();
    p.omega_c2 = 0.0;
    const double a = alpha3_internal(p);
    for (double s : {-30.0, -1.0, 0.5, 12.0}) {
        const cd direct = cd(0.0, -a) / std::conj(cd(-p.gamma_31, p.delta_c2 - s));
        CHECK(rel(chi_s3_he(p, s, 0.0), direct) < 1e-13);
    }
}

TEST_CASE("fifth-order response against exact rational arithmetic") {
    const SystemParams p = base_params();

    const oracle::QC P41 = oracle::qc("-1", "-20");
    const oracle::QC P51 = oracle::qc("-0.2", "-20");
    const oracle::QC F21 = oracle::qc("-0.04", "-20");
    const oracle::QC F31 = oracle::qc("-1", "-20");
    const oracle::QC G41 = oracle::qc("-1", "-100");
    const oracle::QC G51 = oracle::qc("-0.2", "-100");
    const oracle::QC W(400);
    const oracle::QC D = (P41 * P51 + W) * (F21 * F31 + W);
    const oracle::QC Xi = G41 * G51 + W;
    const oracle::QC val =
        oracle::QC(oracle::Q(0), oracle::Q(-1)) * oracle::conj(P51) / (oracle::conj(Xi) * oracle::conj(D));

    const cd got = chi5_he(p, -80.0, 100.0);
    CHECK(rel(got, val.value()) < 1e-12);
    CHECK(rel(got, cd(4.1728214502652439e-06, -5.3232055831549864e-08)) < 1e-12);
}

TEST_CASE("fifth-order frozen probes") {
    const SystemParams p = base_params();
    CHECK(rel(chi5_he(p, -100.0, 100.0),
              cd(-1.6264417446476843e-12, -1.3011262883557365e-10)) < 1e-12);
    CHECK(rel(chi5_he(p, -103.0, 97.0),
              cd(2.1864559986417193e-09, -2.313301279428264e-10)) < 1e-12);
    CHECK(rel(chi5_he(p, -120.0, 140.0),
              cd(4.1726208469435787e-06, -6.7139967334276646e-08)) < 1e-12);
}

TEST_CASE("fifth-order scaling and switches") {
    SystemParams p = base_params();
    const cd base = chi5_he(p, -80.0, 100.0);

    SystemParams scaled = p;
    scaled.chi5_prefactor = 2.5;
    CHECK(chi5_he(scaled, -80.0, 100.0) == 2.5 * base);

    SystemParams unconj = p;
    unconj.chi5_unconjugated = true;
    const DressingDenominators d = dressing(p, -80.0, 100.0);
    CHECK(chi5_he(unconj, -80.0, 100.0) == cd(0.0, -1.0) * d.Pi_51 / (d.Xi * d.D));
    CHECK(chi5_he(unconj, -80.0, 100.0) != base);

    // only coupling intensities enter
    SystemParams rot = p;
    rot.omega_c1 = std::polar(20.0, 0.7);
    rot.omega_c2 = std::polar(20.0, -1.2);
    CHECK(rel(chi5_he(rot, -80.0, 100.0), base) < 1e-13);

    // a strong first coupling suppresses the whole surface
    SystemParams strong = p;
    strong.omega_c1 = 2000.0;
    CHECK(std::abs(chi5_he(strong, -80.0, 100.0)) < 1e-6 * std::abs(base));
}

TEST_CASE("per-channel linear responses: frozen probes") {
    const SystemParams p = base_params();

    const cd s1_0 = chi_s1_pcr(p, 0.0);
    CHECK(s1_0.imag() == 0.0);
    CHECK_THAT(s1_0.real(), WithinRel(9.2994580866581589e-09, 1e-12));

    // exact arithmetic for the same probe
    const oracle::Q alpha = oracle::from_decimal("1.5") * oracle::from_decimal("299792458") /
                            (oracle::Q(2) * oracle::from_decimal("0.015") *
                             oracle::from_decimal("2.42e15"));
    const oracle::QC t = oracle::qc("0", "0.6");
    const oracle::QC den = t * t + oracle::QC(400);
    const oracle::QC val = oracle::QC(oracle::Q(0), -alpha) * t / den;
    CHECK(rel(s1_0, val.value()) < 1e-12);

    CHECK(rel(chi_s1_pcr(p, 7.0),
              cd(6.472019926440306e-09, -9.6765286899272353e-08)) < 1e-12);
    CHECK(rel(chi_s2_pcr(p, 97.0),
              cd(7.532818649647753e-09, 4.5520753923736464e-08)) < 1e-12);
    CHECK(rel(chi_s3_pcr(p, -20.0),
              cd(-4.5813876794150623e-10, 5.9558268902541469e-06)) < 1e-12);
}

TEST_CASE("the two linear formulations agree identically on the shared axis") {
    SystemParams p = base_params();
    double worst = 0.0;
    double gmax = 0.0;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double nu1 = -137.5 + i * 10.625;
            const double nu2 = 62.5 + j * 10.625;
            const cd a = chi_s3_he(p, nu1, nu2);
            const cd b = chi_s3_pcr(p, -(nu1 + nu2));
            worst = std::max(worst, std::abs(a - b));
            gmax = std::max(gmax, std::abs(a));
        }
    }
    CHECK(worst / gmax < 1e-12);

    p.delta_c2 = 7.5;
    worst = gmax = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double s = -45.0 + k * 1.375;
        const cd a = chi_s3_he(p, s, 0.0);
        const cd b = chi_s3_pcr(p, -s);
        worst = std::max(worst, std::abs(a - b));
        gmax = std::max(gmax, std::abs(a));
    }
    CHECK(worst / gmax < 1e-12);
}

TEST_CASE("per-channel fifth-order responses: frozen probes") {
    const SystemParams p = base_params();
    CHECK(rel(chi5_pcr_s3(p, -80.0, 100.0),
              cd(-1.2228194107645771e-09, 5.0059730193570149e-08)) < 1e-12);
    CHECK(rel(chi5_pcr_s2(p, -80.0, 100.0),
              cd(-8.3312781826502527e-10, -1.1663860549378971e-11)) < 1e-12);
    CHECK(rel(chi5_pcr_s1(p, -80.0, 100.0),
              cd(2.0769163098602806e-08, -5.9470394919356688e-10)) < 1e-12);
}

TEST_CASE("with both couplings off the channel response factorizes exactly") {
    SystemParams p = base_params();
    p.omega_c1 = 0.0;
    p.omega_c2 = 0.0;
    const double s = 20.0;
    const cd g41(-p.gamma_41, p.delta_p);
    const cd g51(-p.gamma_51, p.delta_p + p.delta_c1);
    const cd f21(-p.gamma_21, -s);
    const cd f31(-p.gamma_31, p.delta_c2 - s);
    const cd expected = cd(0.0, -1.0) / ((g41 * g51) * g41 * (f21 * f31));
    const cd got = chi5_pcr_s3(p, -80.0, 100.0);
    CHECK(rel(got, expected) < 1e-14);
    CHECK(rel(got, cd(2.4897963687453403e-09, 1.8447614058545415e-10)) < 1e-12);
}

TEST_CASE("no-gain sweep accepts the shipped parameter sets") {
    CHECK_NOTHROW(check_absorption_orientation(load_preset("fig2a").params));
    CHECK_NOTHROW(check_absorption_orientation(load_preset("fig3c").params));
    SystemParams p = base_params();
    p.gamma_21 = 0.0;
    CHECK_NOTHROW(check_absorption_orientation(p));
}

TEST_CASE("response functions are pure") {
    const SystemParams p = base_params();
    CHECK(chi5_he(p, -91.3, 104.7) == chi5_he(p, -91.3, 104.7));
    CHECK(chi_s3_he(p, -91.3, 104.7) == chi_s3_he(p, -91.3, 104.7));
}
