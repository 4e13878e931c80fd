#include "bubbly/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace bubbly::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double out = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(out))
        throw ConfigError("config: '" + key + "' expects a finite number, got '" + v + "'");
    return out;
}

long to_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    long out = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

std::set<Format> to_formats(const std::string& v) {
    std::set<Format> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "csv") out.insert(Format::csv);
        else if (item == "json") out.insert(Format::json);
        else if (item == "svg") out.insert(Format::svg);
        else throw ConfigError("config: unknown output format '" + item + "'");
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double RunConfig::epsilon() const {
    if (eps) return *eps;
    if (eps_rel) return *eps_rel * R;
    return 0.0;
}

Geometry RunConfig::geometry() const {
    Geometry g;
    g.R = R;
    g.eps = epsilon();
    g.N = N;
    return g;
}

void RunConfig::validate() const {
    for (double p : {medium.rho_w, medium.kappa_w, medium.rho_b, medium.kappa_b})
        if (!(p > 0.0)) throw ConfigError("config: material parameters must be positive");
    if (!(medium.rho_b < medium.rho_w)) throw ConfigError("config: rho_b must be smaller than rho_w (delta < 1)");
    if (!(R > 0.0 && R < 0.5)) throw ConfigError("config: R must lie in (0, 1/2)");
    const double rd = R + epsilon();
    if (!(rd > 0.0 && rd < 0.5)) throw ConfigError("config: R + eps must lie in (0, 1/2)");
    if (N < 1 || N > 30) throw ConfigError("config: N must lie in [1, 30]");
    if (samples_per_edge < 8) throw ConfigError("config: samples_per_edge must be >= 8");
    if (quad_order < 4 || quad_order > 128) throw ConfigError("config: quad_order must lie in [4, 128]");
    if (formats.empty()) throw ConfigError("config: formats must not be empty");
    if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
    if (cells < 0 || cells > 10) throw ConfigError("config: cells must lie in [0, 10]");
    if (resolution < 1 || resolution > 64) throw ConfigError("config: resolution must lie in [1, 64]");
    if (!(r_min > 0.0 && r_min < r_max && r_max < 0.5)) throw ConfigError("config: need 0 < r_min < r_max < 1/2");
    if (steps < 2) throw ConfigError("config: steps must be >= 2");
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
    const std::string key = trim(raw_key);
    if (key == "rho_w") cfg.medium.rho_w = to_double(key, value);
    else if (key == "kappa_w") cfg.medium.kappa_w = to_double(key, value);
    else if (key == "rho_b") cfg.medium.rho_b = to_double(key, value);
    else if (key == "kappa_b") cfg.medium.kappa_b = to_double(key, value);
    else if (key == "R") cfg.R = to_double(key, value);
    else if (key == "eps") {
        cfg.eps = to_double(key, value);
        cfg.eps_rel.reset();
    } else if (key == "eps_rel") {
        cfg.eps_rel = to_double(key, value);
        cfg.eps.reset();
    } else if (key == "N") cfg.N = static_cast<int>(to_int(key, value));
    else if (key == "samples_per_edge") cfg.samples_per_edge = static_cast<int>(to_int(key, value));
    else if (key == "quad_order") cfg.quad_order = static_cast<int>(to_int(key, value));
    else if (key == "out_dir") cfg.out_dir = trim(value);
    else if (key == "formats") cfg.formats = to_formats(value);
    else if (key == "workers") {
        const long w = to_int(key, value);
        if (w < 0) throw ConfigError("config: workers must be >= 0");
        cfg.workers = static_cast<unsigned>(w);
    } else if (key == "cells") cfg.cells = static_cast<int>(to_int(key, value));
    else if (key == "resolution") cfg.resolution = static_cast<int>(to_int(key, value));
    else if (key == "r_min") cfg.r_min = to_double(key, value);
    else if (key == "r_max") cfg.r_max = to_double(key, value);
    else if (key == "steps") cfg.steps = static_cast<int>(to_int(key, value));
    else throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig load_config(const std::optional<std::string>& path, const Overrides& overrides) {
    RunConfig cfg;
    if (path) {
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::ini_parser::read_ini(*path, tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (tree.count("eps") && tree.count("eps_rel")) throw ConfigError("config: set either eps or eps_rel, not both");
        for (const auto& [key, node] : tree) {
            if (!node.empty()) throw ConfigError("config: sections are not supported ('" + key + "')");
            apply_setting(cfg, key, node.data());
        }
    }
    if (overrides.count("eps") && overrides.count("eps_rel")) throw ConfigError("config: set either eps or eps_rel, not both");
    for (const auto& [key, value] : overrides) apply_setting(cfg, key, value);
    cfg.validate();
    return cfg;
}

std::string canonical(const RunConfig& cfg) {
    std::string fmts;
    for (Format f : cfg.formats) fmts += f == Format::csv ? "csv;" : f == Format::json ? "json;" : "svg;";
    return "rho_w=" + num(cfg.medium.rho_w) + " kappa_w=" + num(cfg.medium.kappa_w) + " rho_b=" + num(cfg.medium.rho_b) +
           " kappa_b=" + num(cfg.medium.kappa_b) + " R=" + num(cfg.R) + " eps=" + num(cfg.epsilon()) +
           " N=" + std::to_string(cfg.N) + " samples_per_edge=" + std::to_string(cfg.samples_per_edge) +
           " quad_order=" + std::to_string(cfg.quad_order) + " cells=" + std::to_string(cfg.cells) +
           " resolution=" + std::to_string(cfg.resolution) + " r_min=" + num(cfg.r_min) + " r_max=" + num(cfg.r_max) +
           " steps=" + std::to_string(cfg.steps) + " formats=" + fmts;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bubbly::cli
