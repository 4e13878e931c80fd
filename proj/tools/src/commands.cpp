#include "bubbly/cli/commands.hpp"

#include "bubbly/cli/output.hpp"
#include "bubbly/defect.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <deque>
#include <filesystem>
#include <ostream>

namespace bubbly::cli {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

DefectSearchOptions search_options(const RunConfig& cfg) {
    DefectSearchOptions o;
    o.quad.order = cfg.quad_order;
    o.workers = cfg.workers;
    return o;
}

Geometry unperturbed(const RunConfig& cfg) {
    Geometry g = cfg.geometry();
    g.eps = 0.0;
    return g;
}

std::string fmt(double v) { return csv_number(v); }

}  // namespace

int cmd_band(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const BandStructure bs = band_structure(cfg.medium, unperturbed(cfg), cfg.samples_per_edge, cfg.workers);
    const std::string hash = fnv1a_hex(canonical(cfg));
    std::vector<std::vector<double>> rows;
    for (const auto& s : bs.samples) {
        if (s.ok) rows.push_back({s.path, s.alpha.x, s.alpha.y, s.omega});
        else err << "band: sample at path " << fmt(s.path) << " failed: " << s.error << "\n";
    }
    if (cfg.wants(Format::csv)) write_csv(out_path(cfg, "band.csv"), {"path_parameter", "alpha_x", "alpha_y", "omega1"}, rows);
    if (cfg.wants(Format::svg)) write_text(out_path(cfg, "band.svg"), band_svg(bs, std::nullopt, hash));
    if (cfg.wants(Format::json)) {
        nlohmann::ordered_json j;
        j["spec_version"] = 1;
        j["R"] = cfg.R;
        j["N"] = cfg.N;
        j["samples_per_edge"] = cfg.samples_per_edge;
        j["omega_star"] = bs.omega_star;
        j["failures"] = bs.failures();
        write_text(out_path(cfg, "band.json"), j.dump(2) + "\n");
    }
    out << "omega_star = " << fmt(bs.omega_star) << "\n";
    if (bs.failures() > 0) {
        err << "band: " << bs.failures() << " sample(s) failed\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_defect(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Geometry geo = cfg.geometry();
    if (geo.eps == 0.0) throw ConfigError("defect: eps (or eps_rel) must be set and non-zero");
    const DefectResult r = analyze_defect(cfg.medium, geo, search_options(cfg));
    const std::string hash = fnv1a_hex(canonical(cfg));
    const nlohmann::ordered_json report = defect_report(r, geo);
    if (cfg.wants(Format::json)) write_text(out_path(cfg, "defect.json"), report.dump(2) + "\n");
    if (cfg.wants(Format::csv)) {
        const double nan = std::nan("");
        write_csv(out_path(cfg, "defect.csv"),
                  {"omega_star", "omega_eps", "omega_eps_asymptotic", "exists", "S_of_R", "c_delta", "residual"},
                  {{r.omega_star, r.omega_eps.value_or(nan), r.omega_eps_asymptotic.value_or(nan), r.exists ? 1.0 : 0.0,
                    r.S_of_R, r.c_delta, r.exists ? r.residual : nan}});
    }
    if (cfg.wants(Format::svg)) {
        const BandStructure bs = band_structure(cfg.medium, unperturbed(cfg), cfg.samples_per_edge, cfg.workers);
        write_text(out_path(cfg, "defect_band.svg"), band_svg(bs, r.omega_eps, hash));
    }
    out << "omega_star = " << fmt(r.omega_star) << "\n";
    out << "regime = " << to_string(r.regime) << " (S(R) = " << fmt(r.S_of_R) << ")\n";
    if (r.exists) out << "omega_eps = " << fmt(*r.omega_eps) << " (residual " << fmt(r.residual) << ")\n";
    else out << "no defect mode in the searched part of the gap\n";
    if (r.omega_eps_asymptotic) out << "omega_eps_asymptotic = " << fmt(*r.omega_eps_asymptotic) << "\n";
    else out << "asymptotic formula predicts no mode for this sign of eps\n";
    return kExitOk;
}

int cmd_sweep_S(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    std::vector<double> R(cfg.steps), S(cfg.steps);
    Geometry g = unperturbed(cfg);
    auto S_at = [&](double r) {
        g.R = r;
        return factor_S(g);
    };
    for (int i = 0; i < cfg.steps; ++i) {
        R[i] = cfg.r_min + (cfg.r_max - cfg.r_min) * i / (cfg.steps - 1);
        S[i] = S_at(R[i]);
    }
    std::optional<double> root;
    for (int i = 0; i + 1 < cfg.steps && !root; ++i) {
        if (std::signbit(S[i]) == std::signbit(S[i + 1])) continue;
        double a = R[i], b = R[i + 1], fa = S[i];
        while (b - a > 1e-12) {
            const double m = 0.5 * (a + b), fm = S_at(m);
            if (std::signbit(fm) == std::signbit(fa)) a = m, fa = fm;
            else b = m;
        }
        root = 0.5 * (a + b);
    }
    const std::string hash = fnv1a_hex(canonical(cfg));
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < cfg.steps; ++i) rows.push_back({R[i], S[i]});
    if (cfg.wants(Format::csv)) write_csv(out_path(cfg, "sweep_S.csv"), {"R", "S"}, rows);
    if (cfg.wants(Format::svg)) write_text(out_path(cfg, "sweep_S.svg"), sweep_svg(R, S, root, hash));
    if (cfg.wants(Format::json)) {
        nlohmann::ordered_json j;
        j["spec_version"] = 1;
        j["r_min"] = cfg.r_min;
        j["r_max"] = cfg.r_max;
        j["steps"] = cfg.steps;
        j["R0"] = root ? nlohmann::ordered_json(*root) : nlohmann::ordered_json(nullptr);
        write_text(out_path(cfg, "sweep_S.json"), j.dump(2) + "\n");
    }
    if (root) out << "R0 = " << fmt(*root) << "\n";
    else out << "S(R) does not change sign on [" << fmt(cfg.r_min) << ", " << fmt(cfg.r_max) << "]\n";
    return kExitOk;
}

int cmd_mode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Geometry geo = cfg.geometry();
    if (geo.eps == 0.0) throw ConfigError("mode: eps (or eps_rel) must be set and non-zero");
    const double omega_star = first_band_frequency(kAlphaStar, cfg.medium, unperturbed(cfg)).root;
    const DefectSearchOptions opt = search_options(cfg);
    const DefectResult r = find_defect_frequency(cfg.medium, geo, omega_star, opt);
    if (!r.exists) {
        err << "mode: no defect mode exists for this configuration; nothing to reconstruct\n";
        return kExitOk;
    }
    ModeGrid grid;
    grid.cells = cfg.cells;
    grid.resolution = cfg.resolution;
    ModeField field = reconstruct_mode(r, cfg.medium, geo, opt.quad, grid, cfg.workers);
    double top = 0.0;
    for (const auto& s : field.samples) top = std::max(top, std::abs(s.u));
    for (auto& s : field.samples) s.u /= top;
    for (auto& m : field.ring_max) m /= top;

    const std::string hash = fnv1a_hex(canonical(cfg));
    if (cfg.wants(Format::csv)) {
        std::vector<std::vector<double>> rows;
        for (const auto& s : field.samples) rows.push_back({s.x, s.y, s.u.real(), s.u.imag(), std::abs(s.u)});
        write_csv(out_path(cfg, "mode.csv"), {"x", "y", "re_u", "im_u", "abs_u"}, rows);
    }
    if (cfg.wants(Format::svg)) write_text(out_path(cfg, "mode.svg"), mode_svg(field, hash));
    if (cfg.wants(Format::json)) {
        nlohmann::ordered_json j;
        j["spec_version"] = 1;
        j["omega_star"] = omega_star;
        j["omega_eps"] = *r.omega_eps;
        j["cells"] = cfg.cells;
        j["resolution"] = cfg.resolution;
        j["ring_max"] = field.ring_max;
        write_text(out_path(cfg, "mode.json"), j.dump(2) + "\n");
    }
    out << "omega_eps = " << fmt(*r.omega_eps) << "\n";
    out << "ring maxima:";
    for (double m : field.ring_max) out << " " << fmt(m);
    out << "\n";
    const double ratio = field.ring_max.back() / field.ring_max.front();
    out << "outer/center = " << fmt(ratio) << (ratio < 0.2 ? " (below 0.2)" : " (not below 0.2)") << "\n";
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subwavelength band structure and defect modes of a square bubbly crystal"};
    app.require_subcommand(1);

    struct Bound {
        CLI::App* sub;
        std::string key;
        CLI::Option* opt;
        std::string value;
    };
    std::string config_path;
    std::deque<Bound> bound;  // stable addresses for CLI11's bindings
    auto bind = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        bound.push_back({sub, key, nullptr, {}});
        bound.back().opt = sub->add_option(flag, bound.back().value, help);
    };
    CLI::App* band = app.add_subcommand("band", "first band along Gamma-X-M-Gamma");
    CLI::App* defect = app.add_subcommand("defect", "defect-mode frequency and asymptotics");
    CLI::App* sweep = app.add_subcommand("sweep-S", "S(R) over a radius range and its root");
    CLI::App* mode = app.add_subcommand("mode", "localized mode field");
    for (CLI::App* sub : {band, defect, sweep, mode}) {
        sub->add_option("--config", config_path, "key = value configuration file");
        bind(sub, "--R", "R", "bubble radius");
        bind(sub, "--N", "N", "Fourier truncation order");
        bind(sub, "--samples", "samples_per_edge", "band samples per path edge");
        bind(sub, "--quad-order", "quad_order", "BZ quadrature points per axis");
        bind(sub, "--out", "out_dir", "output directory");
        bind(sub, "--formats", "formats", "comma separated subset of csv,json,svg");
        bind(sub, "--workers", "workers", "worker threads (0 = all cores)");
        bind(sub, "--eps", "eps", "absolute radius perturbation");
        bind(sub, "--eps-rel", "eps_rel", "radius perturbation as a fraction of R");
    }
    bind(sweep, "--r-min", "r_min", "smallest radius");
    bind(sweep, "--r-max", "r_max", "largest radius");
    bind(sweep, "--steps", "steps", "number of radii");
    bind(mode, "--cells", "cells", "grid spans cells -K..K");
    bind(mode, "--resolution", "resolution", "samples per cell side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    CLI::App* chosen = app.get_subcommands().front();
    Overrides ov;
    for (const Bound& b : bound)
        if (b.sub == chosen && b.opt->count() > 0) ov[b.key] = b.value;

    try {
        const auto path = config_path.empty() ? std::nullopt : std::optional<std::string>(config_path);
        const RunConfig cfg = load_config(path, ov);
        if (chosen == band) return cmd_band(cfg, out, err);
        if (chosen == defect) return cmd_defect(cfg, out, err);
        if (chosen == sweep) return cmd_sweep_S(cfg, out, err);
        return cmd_mode(cfg, out, err);
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kExitConfig;
    } catch (const bubbly::Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace bubbly::cli
