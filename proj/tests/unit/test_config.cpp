#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cstdint>

#include <sswm/config.hpp>

using namespace sswm;

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool identical(const SystemParams& a, const SystemParams& b) {
    return same_bits(a.gamma_21, b.gamma_21) && same_bits(a.gamma_31, b.gamma_31) &&
           same_bits(a.gamma_32, b.gamma_32) && same_bits(a.gamma_41, b.gamma_41) &&
           same_bits(a.gamma_42, b.gamma_42) && same_bits(a.gamma_43, b.gamma_43) &&
           same_bits(a.gamma_51, b.gamma_51) && same_bits(a.gamma_52, b.gamma_52) &&
           same_bits(a.gamma_53, b.gamma_53) && same_bits(a.gamma_54, b.gamma_54) &&
           same_bits(a.delta_p, b.delta_p) && same_bits(a.delta_c1, b.delta_c1) &&
           same_bits(a.delta_c2, b.delta_c2) &&
           same_bits(a.omega_c1.real(), b.omega_c1.real()) &&
           same_bits(a.omega_c1.imag(), b.omega_c1.imag()) &&
           same_bits(a.omega_c2.real(), b.omega_c2.real()) &&
           same_bits(a.omega_c2.imag(), b.omega_c2.imag()) &&
           same_bits(a.length_L, b.length_L) && same_bits(a.optical_depth, b.optical_depth) &&
           same_bits(a.central_freq_s3, b.central_freq_s3) &&
           same_bits(a.k_offset, b.k_offset) && same_bits(a.gamma31_si, b.gamma31_si) &&
           same_bits(a.chi5_prefactor, b.chi5_prefactor) &&
           a.chi5_unconjugated == b.chi5_unconjugated &&
           a.halve_absorption == b.halve_absorption &&
           a.literal_omega_tr == b.literal_omega_tr;
}

}  // namespace

TEST_CASE("parser handles comments, blanks, quotes and rejects junk") {
    const ConfigDoc doc = parse_config_text(
        "# leading comment\n"
        "\n"
        "preset = \"fig2a\"  # trailing comment\n"
        "optical_depth = 3\n");
    CHECK(doc.kv.at("preset") == "fig2a");
    CHECK(doc.kv.at("optical_depth") == "3");

    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(resolve_config(parse_config_text("no_such_key = 1\n")), ConfigError);
    CHECK_THROWS_AS(resolve_config(parse_config_text("optical_depth = banana\n")), ConfigError);
    CHECK_THROWS_AS(resolve_config(parse_config_text("halve_absorption = maybe\n")), ConfigError);
}

TEST_CASE("MHz frequencies convert through the anchor") {
    // gamma_31 of 3 MHz anchors the unit; -300 MHz is then -100 units
    const ResolvedConfig rc = resolve_config(parse_config_text(
        "gamma_31 = 3\n"
        "delta_p = -300\n"
        "omega_c1 = 60\n"));
    CHECK(rc.params.gamma_31 == 1.0);
    CHECK(rc.params.gamma31_si == 2.0 * M_PI * 3.0e6);
    CHECK_THAT(rc.params.delta_p, Catch::Matchers::WithinRel(-100.0, 1e-15));
    CHECK_THAT(rc.params.omega_c1.real(), Catch::Matchers::WithinRel(20.0, 1e-15));

    // angular mode reads Mrad/s directly
    const ResolvedConfig ang = resolve_config(parse_config_text(
        "angular = true\n"
        "gamma_31 = 6\n"
        "delta_p = -12\n"));
    CHECK(ang.params.gamma31_si == 6.0e6);
    CHECK_THAT(ang.params.delta_p, Catch::Matchers::WithinRel(-2.0, 1e-15));

    CHECK_THROWS_AS(resolve_config(parse_config_text("units = gamma31\nangular = true\n")),
                    ConfigError);
}

TEST_CASE("preset plus explicit keys: keys win") {
    const ResolvedConfig rc = resolve_config(parse_config_text(
        "preset = fig2a\n"
        "units = gamma31\n"
        "omega_c1 = 5\n"
        "grid_n1 = 256\n"));
    CHECK(rc.preset == "fig2a");
    CHECK(rc.params.omega_c1 == std::complex<double>(5.0));
    CHECK(rc.params.omega_c2 == std::complex<double>(20.0));
    CHECK(rc.has_preset_grid);
    CHECK(rc.grid.n1 == 256);
    CHECK(rc.grid.n2 == 512);
    CHECK(rc.grid.nu1_span == 80.0);
}

TEST_CASE("primary rates re-derive pooled dephasings unless overridden") {
    const ResolvedConfig rc = resolve_config(parse_config_text(
        "units = gamma31\n"
        "gamma_21 = 0.1\n"
        "gamma_51 = 0.3\n"));
    CHECK(rc.params.gamma_32 == 0.5 * (1.0 + 0.1));
    CHECK(rc.params.gamma_52 == 0.5 * (0.3 + 0.1));
    CHECK(rc.params.gamma_54 == 0.5 * (0.3 + 1.0));

    const ResolvedConfig ov = resolve_config(parse_config_text(
        "units = gamma31\n"
        "gamma_21 = 0.1\n"
        "gamma_32 = 0.9\n"));
    CHECK(ov.params.gamma_32 == 0.9);
}

TEST_CASE("length keys") {
    CHECK(resolve_config(parse_config_text("length_cm = 1.5\n")).params.length_L == 0.015);
    CHECK(resolve_config(parse_config_text("length_m = 0.02\n")).params.length_L == 0.02);
    CHECK_THROWS_AS(resolve_config(parse_config_text("length_cm = 1\nlength_m = 0.01\n")),
                    ConfigError);
}

TEST_CASE("couplings by components or magnitude and phase, not both") {
    const ResolvedConfig rc = resolve_config(parse_config_text(
        "units = gamma31\n"
        "omega_c1_re = 3\n"
        "omega_c1_im = -4\n"));
    CHECK(rc.params.omega_c1 == std::complex<double>(3.0, -4.0));

    const ResolvedConfig ph = resolve_config(parse_config_text(
        "units = gamma31\n"
        "omega_c2 = 2\n"
        "omega_c2_phase_rad = 1.5707963267948966\n"));
    CHECK_THAT(ph.params.omega_c2.imag(), Catch::Matchers::WithinRel(2.0, 1e-15));

    CHECK_THROWS_AS(resolve_config(parse_config_text(
                        "units = gamma31\nomega_c1 = 1\nomega_c1_re = 1\n")),
                    ConfigError);
}

TEST_CASE("serialized parameters reload bit for bit") {
    SystemParams p = load_preset("fig2b").params;
    p.omega_c1 = std::polar(10.0, 0.37);
    p.omega_c2 = std::complex<double>(-49.25, 3.75e-3);
    p.delta_c2 = 1.0 / 3.0;
    p.k_offset = -12.345678901234567;
    p.chi5_prefactor = 2.5e-7;
    p.chi5_unconjugated = true;
    p.halve_absorption = true;
    p.literal_omega_tr = true;
    p.gamma_21 = 0.017453292519943295;

    const std::string text = serialize_params(p);
    const ResolvedConfig rc = resolve_config(parse_config_text(text));
    CHECK(identical(p, rc.params));
    CHECK(rc.chi5_prefactor_explicit);
}

TEST_CASE("explicit chi5 prefactor is flagged for exporters") {
    CHECK_FALSE(resolve_config(parse_config_text("preset = fig2a\n")).chi5_prefactor_explicit);
    CHECK(resolve_config(parse_config_text("chi5_prefactor = 1\n")).chi5_prefactor_explicit);
}
