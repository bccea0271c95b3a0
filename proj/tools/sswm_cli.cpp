// Command-line front end: evaluates response surfaces, delay-domain
// correlations and the cross-channel comparison, writing CSV data plus JSON
// manifests with checksums. Exit codes: 0 ok, 2 bad input, 3 numeric
// precondition, 4 broken invariant.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <sswm/sswm.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sswm;

namespace {

struct CommonOpts {
    std::string preset;
    std::string config_path;
    std::string out_dir = ".";
    std::string grid_str;
    std::string span_str;
    bool halve_absorption = false;
    bool literal_omega_tr = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--preset", o.preset, "named parameter set (see --help-presets)");
    cmd->add_option("--config", o.config_path, "key = value parameter file");
    cmd->add_option("--grid", o.grid_str, "lattice size as N1xN2 (powers of two)");
    cmd->add_option("--span", o.span_str, "axis spans as S1xS2 in gamma_31 units");
    cmd->add_option("--out", o.out_dir, "output directory (created if missing)");
    cmd->add_flag("--halve-absorption", o.halve_absorption,
                  "amplitude-convention absorption in the phase mismatch");
    cmd->add_flag("--literal-omega-tr", o.literal_omega_tr,
                  "first-power transparency-bandwidth scaling variant");
}

struct Resolved {
    SystemParams params;
    FrequencyGrid2D grid;
    std::string preset;
    bool chi5_prefactor_explicit = false;
    std::size_t max_points = default_max_points;
};

Resolved resolve(const CommonOpts& o) {
    ConfigDoc doc;
    if (!o.config_path.empty()) doc = load_config_file(o.config_path);
    if (!o.preset.empty()) {
        if (!doc.kv.count("preset")) doc.order.push_back("preset");
        doc.kv["preset"] = o.preset;  // the flag outranks the file
    }
    ResolvedConfig rc = resolve_config(doc);

    Resolved r;
    r.params = rc.params;
    r.preset = rc.preset;
    r.chi5_prefactor_explicit = rc.chi5_prefactor_explicit;
    r.max_points = rc.max_grid_points;
    if (rc.has_preset_grid) {
        r.grid = rc.grid;
    } else {
        const auto& ov = rc.grid_overrides;
        if (ov.n1 && ov.n2 && ov.center1 && ov.center2 && ov.span1 && ov.span2) {
            r.grid = FrequencyGrid2D{*ov.center1, *ov.span1, *ov.n1,
                                     *ov.center2, *ov.span2, *ov.n2};
        } else {
            r.grid = auto_grid(r.params);
            ov.apply(r.grid);
        }
    }
    if (!o.grid_str.empty()) {
        int n1 = 0, n2 = 0, used = 0;
        if (std::sscanf(o.grid_str.c_str(), "%dx%d%n", &n1, &n2, &used) != 2 ||
            used != int(o.grid_str.size()) || n1 <= 0 || n2 <= 0)
            throw ConfigError("--grid expects N1xN2, got '" + o.grid_str + "'");
        r.grid.n1 = n1;
        r.grid.n2 = n2;
    }
    if (!o.span_str.empty()) {
        double s1 = 0, s2 = 0;
        int used = 0;
        if (std::sscanf(o.span_str.c_str(), "%lfx%lf%n", &s1, &s2, &used) != 2 ||
            used != int(o.span_str.size()) || !(s1 > 0) || !(s2 > 0))
            throw ConfigError("--span expects S1xS2 with positive spans, got '" + o.span_str + "'");
        r.grid.nu1_span = s1;
        r.grid.nu2_span = s2;
    }
    if (o.halve_absorption) r.params.halve_absorption = true;
    if (o.literal_omega_tr) r.params.literal_omega_tr = true;
    return r;
}

json params_json(const SystemParams& p) {
    return json{{"units", "gamma31"},
                {"gamma_21", p.gamma_21},
                {"gamma_31", p.gamma_31},
                {"gamma_32", p.gamma_32},
                {"gamma_41", p.gamma_41},
                {"gamma_42", p.gamma_42},
                {"gamma_43", p.gamma_43},
                {"gamma_51", p.gamma_51},
                {"gamma_52", p.gamma_52},
                {"gamma_53", p.gamma_53},
                {"gamma_54", p.gamma_54},
                {"delta_p", p.delta_p},
                {"delta_c1", p.delta_c1},
                {"delta_c2", p.delta_c2},
                {"omega_c1_re", p.omega_c1.real()},
                {"omega_c1_im", p.omega_c1.imag()},
                {"omega_c2_re", p.omega_c2.real()},
                {"omega_c2_im", p.omega_c2.imag()},
                {"length_m", p.length_L},
                {"optical_depth", p.optical_depth},
                {"central_freq_s3", p.central_freq_s3},
                {"k_offset", p.k_offset},
                {"gamma31_si", p.gamma31_si},
                {"chi5_prefactor", p.chi5_prefactor},
                {"chi5_unconjugated", p.chi5_unconjugated},
                {"halve_absorption", p.halve_absorption},
                {"literal_omega_tr", p.literal_omega_tr}};
}

json grid_json(const FrequencyGrid2D& g) {
    return json{{"nu1_center", g.nu1_center}, {"nu1_span", g.nu1_span}, {"n1", g.n1},
                {"nu2_center", g.nu2_center}, {"nu2_span", g.nu2_span}, {"n2", g.n2},
                {"dnu1", g.dnu1()},           {"dnu2", g.dnu2()}};
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

struct ManifestBuilder {
    json m;
    std::vector<json> outputs;
    std::vector<std::string> warnings;

    ManifestBuilder(const std::string& command, const Resolved& r) {
        m["tool"] = "sswm";
        m["tool_version"] = version;
        m["command"] = command;
        m["preset"] = r.preset;
        m["params"] = params_json(r.params);
        m["grid"] = grid_json(r.grid);
        m["threads"] = thread_count();
    }

    json add_file(const fs::path& dir, const std::string& name, const std::string& body,
                  json extra = json::object()) {
        const OutputRecord rec = write_text_file((dir / name).string(), body);
        json o = std::move(extra);
        o["file"] = name;
        o["bytes"] = rec.bytes;
        o["checksum_fnv1a64"] = rec.checksum;
        outputs.push_back(o);
        // sidecar mirrors the entry so each CSV is self-describing
        write_text_file((dir / (name + ".json")).string(), o.dump(2) + "\n");
        return o;
    }

    void finish(const fs::path& dir, double wall_ms) {
        m["outputs"] = outputs;
        m["warnings"] = warnings;
        m["wall_ms"] = wall_ms;
        write_text_file((dir / "manifest.json").string(), m.dump(2) + "\n");
    }
};

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

json eit_json_or_null(const SystemParams& p) {
    try {
        const EitMetrics m = eit_metrics(p);
        return json{{"v3_m_per_s", m.v3}, {"omega_tr_rad_per_s", m.omega_tr}, {"delay_s", m.delay}};
    } catch (const PreconditionError&) {
        return nullptr;
    }
}

// ---------------------------------------------------------------- spectra

int cmd_spectra(const CommonOpts& common, const std::string& quantity_str, bool want_peaks,
                const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    Resolved r = resolve(common);
    const Quantity q = parse_quantity(quantity_str);
    const fs::path dir(common.out_dir);
    fs::create_directories(dir);

    if (q == Quantity::kernel) check_absorption_orientation(r.params);
    SpectralField2D field = evaluate(q, r.params, r.grid);

    ManifestBuilder mb(command, r);
    mb.m["quantity"] = to_string(q);
    mb.m["eit_metrics"] = eit_json_or_null(r.params);

    // fifth-order magnitudes are reported relative to their own peak unless
    // an explicit prefactor pins the scale
    double export_scale = 1.0;
    if ((is_chi5_kind(q) || q == Quantity::kernel) && !r.chi5_prefactor_explicit) {
        double gmax = 0.0;
        for (const auto& v : field.values) gmax = std::max(gmax, std::abs(v));
        if (gmax > 0.0) {
            export_scale = 1.0 / gmax;
            for (auto& v : field.values) v *= export_scale;
        }
    }
    mb.m["export_scale"] = export_scale;

    const int s1 = export_stride(r.grid.n1);
    const int s2 = export_stride(r.grid.n2);
    const std::string name = std::string("spectra_") + to_string(q) + ".csv";
    mb.add_file(dir, name, spectra_csv(field, s1, s2),
                json{{"columns", {"nu1", "nu2", "re", "im", "abs"}},
                     {"frequency_unit", "gamma31"},
                     {"stride", {s1, s2}},
                     {"full_shape", {r.grid.n1, r.grid.n2}},
                     {"export_scale", export_scale}});

    if (is_chi5_kind(q)) {
        try {
            double center[2] = {0.0, 0.0};
            const double resid = central_symmetry_residual(field, center);
            json sym{{"residual", resid}, {"center", {center[0], center[1]}}};
            if (r.params.delta_c1 == 0.0 && r.params.delta_c2 == 0.0)
                sym["analytic_center"] = {r.params.delta_p, -r.params.delta_p};
            mb.m["central_symmetry"] = sym;
        } catch (const PreconditionError& e) {
            mb.warnings.push_back(std::string("central symmetry skipped: ") + e.what());
        }
    }

    if (want_peaks) {
        const std::vector<Peak> peaks = find_peaks(field, 0.5);
        std::string csv = "kind,rank,nu1,nu2,nu3,magnitude\n";
        int rank = 1;
        for (const auto& pk : peaks) {
            csv += "detected," + std::to_string(rank++) + ",";
            append_g17(csv, pk.nu1);
            csv += ',';
            append_g17(csv, pk.nu2);
            csv += ',';
            append_g17(csv, -(pk.nu1 + pk.nu2));
            csv += ',';
            append_g17(csv, pk.magnitude);
            csv += '\n';
        }
        json pj{{"detected", int(peaks.size())}};
        if (r.params.delta_c1 == 0.0 && r.params.delta_c2 == 0.0) {
            const ResonancePrediction pred = predicted_resonances(r.params);
            rank = 1;
            for (const auto& path : pred.pathways) {
                csv += "predicted," + std::to_string(rank++) + ",";
                append_g17(csv, path[0]);
                csv += ',';
                append_g17(csv, path[1]);
                csv += ',';
                append_g17(csv, path[2]);
                csv += ",\n";
            }
            pj["predicted"] = json{{"omega_e1", pred.omega_e1},
                                   {"omega_e2", pred.omega_e2},
                                   {"gamma_e1", pred.gamma_e1},
                                   {"gamma_e2", pred.gamma_e2}};
        } else {
            mb.warnings.push_back(
                "closed-form peak prediction needs both couplings on resonance; "
                "emitting detected peaks only");
        }
        mb.add_file(dir, "peaks.csv", csv, pj);
    }

    mb.finish(dir, ms_since(t0));
    return exit_ok;
}

// ------------------------------------------------------------ correlations

int cmd_correlations(const CommonOpts& common, int oracle_points, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    Resolved r = resolve(common);
    const fs::path dir(common.out_dir);
    fs::create_directories(dir);

    check_absorption_orientation(r.params);
    const SpectralField2D field = evaluate(Quantity::kernel, r.params, r.grid);

    ManifestBuilder mb(command, r);
    mb.m["eit_metrics"] = eit_json_or_null(r.params);

    const double leak = edge_leakage(field);
    mb.m["edge_leakage"] = leak;
    if (leak > leakage_warn_level)
        mb.warnings.push_back("kernel magnitude at the grid edge is " + std::to_string(leak) +
                              " of the peak; the delay transform will ring. Widen --span.");

    const ConditionalTrace r2_s1 = r2_conditional(field, "s1");
    const ConditionalTrace r2_s2 = r2_conditional(field, "s2");

    const Amplitude3 A = amplitude_a3(field);
    mb.m["parseval_defect"] = parseval_defect(field, A);

    json oracle_json = nullptr;
    std::string oracle_csv_body;
    if (oracle_points > 0) {
        const auto probes = draw_probe_points(A, oracle_points);
        const auto quad = quadrature_a3(field, probes);
        double amax = 0.0;
        for (const auto& v : A.a) amax = std::max(amax, std::abs(v));
        std::string csv = "tau31,tau32,abs_quadrature,abs_transform,rel_dev\n";
        double worst = 0.0;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const int i = int(std::lround((probes[k].first - A.tau1[0]) / A.dtau1));
            const int j = int(std::lround((probes[k].second - A.tau2[0]) / A.dtau2));
            const double at = std::abs(A.at(i, j));
            const double aq = std::abs(quad[k]);
            const double dev = std::abs(aq - at) / amax;
            worst = std::max(worst, dev);
            append_g17(csv, probes[k].first);
            csv += ',';
            append_g17(csv, probes[k].second);
            csv += ',';
            append_g17(csv, aq);
            csv += ',';
            append_g17(csv, at);
            csv += ',';
            append_g17(csv, dev);
            csv += '\n';
        }
        oracle_json = json{{"points", int(probes.size())}, {"max_rel_dev", worst}};
        oracle_csv_body = std::move(csv);
    }

    const CorrelationSurface surf = r3_from_amplitude(A);

    const RegimeReport regime = classify_regime(r.params);
    mb.m["regime"] = json{{"label", to_string(regime.regime)},
                          {"delta_omega_tr_rad_per_s", regime.delta_omega_tr},
                          {"delta_omega_sl_rad_per_s", regime.delta_omega_sl},
                          {"gamma_e_min_rad_per_s", regime.gamma_e_min},
                          {"rho", regime.rho}};

    const DiagonalMetric diag = diagonal_support_metric(surf);
    mb.m["diagonal_support"] = json{{"frac_tau31_greater", diag.frac_above},
                                    {"frac_tau31_less", diag.frac_below},
                                    {"band_frac", diag.band_frac}};

    // side-aware oscillation and width measurements per trace
    auto measure = [&mb](const ConditionalTrace& t, const std::string& label) {
        json out{{"traced_over", t.traced_over}, {"normalization", t.normalization}};
        int imax = 0;
        for (std::size_t k = 1; k < t.r2.size(); ++k)
            if (t.r2[k] > t.r2[std::size_t(imax)]) imax = int(k);
        out["peak_tau"] = t.tau[std::size_t(imax)];
        out["mass_side"] = t.tau[std::size_t(imax)] >= 0.0 ? "nonnegative" : "negative";
        try {
            out["maxima_spacing"] = maxima_spacing(t);
        } catch (const PreconditionError& e) {
            out["maxima_spacing"] = nullptr;
            mb.warnings.push_back(label + ": " + e.what());
        }
        try {
            out["extent_1e"] = extent_1e(t);
        } catch (const PreconditionError& e) {
            out["extent_1e"] = nullptr;
            mb.warnings.push_back(label + ": " + e.what());
        }
        return out;
    };
    mb.m["measurements"] = json{{"r2_traced_s1", measure(r2_s1, "r2_traced_s1")},
                                {"r2_traced_s2", measure(r2_s2, "r2_traced_s2")}};
    {
        std::size_t kmax = 0;
        for (std::size_t k = 1; k < surf.r3.size(); ++k)
            if (surf.r3[k] > surf.r3[kmax]) kmax = k;
        mb.m["r3_peak"] = json{{"tau31", surf.tau1[kmax / std::size_t(surf.n2)]},
                               {"tau32", surf.tau2[kmax % std::size_t(surf.n2)]},
                               {"normalization", surf.normalization}};
    }

    const int s1 = export_stride(surf.n1);
    const int s2 = export_stride(surf.n2);
    mb.add_file(dir, "r3.csv", r3_csv(surf, s1, s2),
                json{{"columns", {"tau31", "tau32", "r3"}},
                     {"delay_unit", "1/gamma31"},
                     {"stride", {s1, s2}},
                     {"full_shape", {surf.n1, surf.n2}},
                     {"normalization", surf.normalization}});
    mb.add_file(dir, "r2_traced_s1.csv", r2_csv(r2_s1),
                json{{"columns", {"tau", "r2", "traced_over"}},
                     {"delay_unit", "1/gamma31"},
                     {"normalization", r2_s1.normalization}});
    mb.add_file(dir, "r2_traced_s2.csv", r2_csv(r2_s2),
                json{{"columns", {"tau", "r2", "traced_over"}},
                     {"delay_unit", "1/gamma31"},
                     {"normalization", r2_s2.normalization}});
    if (!oracle_json.is_null())
        mb.add_file(dir, "oracle.csv", oracle_csv_body,
                    json{{"columns", {"tau31", "tau32", "abs_quadrature", "abs_transform",
                                      "rel_dev"}},
                         {"oracle", oracle_json}});
    if (!oracle_json.is_null()) mb.m["oracle"] = oracle_json;

    mb.finish(dir, ms_since(t0));
    return exit_ok;
}

// ------------------------------------------------------------- compare-pcr

int cmd_compare_pcr(const CommonOpts& common, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    Resolved r = resolve(common);
    const fs::path dir(common.out_dir);
    fs::create_directories(dir);

    ManifestBuilder mb(command, r);

    // linear response: the two formulations must agree identically on
    // nu3 = -(nu1 + nu2)
    const FrequencyGrid2D& g = r.grid;
    double chi_dev = 0.0, chi_max = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            chi_max = std::max(chi_max, std::abs(chi_s3_he(r.params, g.nu1(i), g.nu2(j))));
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double nu1 = g.nu1(i), nu2 = g.nu2(j);
            const cd a = chi_s3_he(r.params, nu1, nu2);
            const cd b = chi_s3_pcr(r.params, -(nu1 + nu2));
            chi_dev = std::max(chi_dev, std::abs(a - b));
        }
    }
    const double chi_rel = chi_max > 0.0 ? chi_dev / chi_max : 0.0;

    // fifth order: scale-free L2 distance between unit-normalized surfaces
    const Quantity kinds[4] = {Quantity::chi5_he, Quantity::chi5_pcr_s3, Quantity::chi5_pcr_s2,
                               Quantity::chi5_pcr_s1};
    std::vector<std::vector<cd>> fields(4);
    for (int k = 0; k < 4; ++k)
        fields[std::size_t(k)] = evaluate(kinds[k], r.params, g).values;
    auto unit = [](std::vector<cd>& v) {
        long double n2 = 0.0L;
        for (const auto& x : v) n2 += (long double)std::norm(x);
        const double n = double(std::sqrt(n2));
        if (n > 0.0)
            for (auto& x : v) x /= n;
    };
    for (auto& f : fields) unit(f);
    auto dist = [](const std::vector<cd>& a, const std::vector<cd>& b) {
        long double d2 = 0.0L;
        for (std::size_t k = 0; k < a.size(); ++k) d2 += (long double)std::norm(a[k] - b[k]);
        return double(std::sqrt(d2));
    };

    std::string csv = "metric,value\n";
    auto put = [&csv](const std::string& k, double v) {
        csv += k + ",";
        append_g17(csv, v);
        csv += '\n';
    };
    json rep;
    put("chi_s3_max_rel_dev", chi_rel);
    rep["chi_s3_max_rel_dev"] = chi_rel;
    const char* names[4] = {"he", "pcr_s3", "pcr_s2", "pcr_s1"};
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            const double d = dist(fields[std::size_t(a)], fields[std::size_t(b)]);
            const std::string key =
                std::string("chi5_shape_distance_") + names[a] + "_" + names[b];
            put(key, d);
            rep[key] = d;
        }
    }
    mb.m["comparison"] = rep;
    mb.add_file(dir, "pcr_report.csv", csv, json{{"columns", {"metric", "value"}}});
    mb.finish(dir, ms_since(t0));
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"triphoton generation simulator: dressed response surfaces, "
                 "phase-matched kernels and delay-domain correlations"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    CommonOpts sp_common, co_common, pc_common;
    std::string quantity;
    bool want_peaks = false;
    int oracle_points = 0;

    CLI::App* sp = app.add_subcommand("spectra", "evaluate a response surface on a grid");
    add_common(sp, sp_common);
    sp->add_option("--quantity", quantity,
                   "chi_s3 | chi5_he | chi5_pcr_s1 | chi5_pcr_s2 | chi5_pcr_s3 | kernel")
        ->required();
    sp->add_flag("--peaks", want_peaks, "also emit detected and predicted peak tables");

    CLI::App* co = app.add_subcommand("correlations",
                                      "delay-domain triple and pair correlations of the kernel");
    add_common(co, co_common);
    co->add_option("--oracle", oracle_points,
                   "cross-check this many probe points by direct quadrature (max 64)");

    CLI::App* pc = app.add_subcommand("compare-pcr",
                                      "compare the per-channel response formulations");
    add_common(pc, pc_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    const std::string command = join_args(argc, argv);
    try {
        if (app.got_subcommand(sp)) return cmd_spectra(sp_common, quantity, want_peaks, command);
        if (app.got_subcommand(co)) return cmd_correlations(co_common, oracle_points, command);
        if (app.got_subcommand(pc)) return cmd_compare_pcr(pc_common, command);
        std::fprintf(stderr, "no subcommand selected\n");
        return exit_config;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_precondition;
    } catch (const InvariantError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_invariant;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_invariant;
    }
}
