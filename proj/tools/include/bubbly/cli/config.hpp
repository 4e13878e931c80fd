#pragma once

#include "bubbly/medium.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace bubbly::cli {

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json, svg };

struct RunConfig {
    Medium medium;
    double R = 0.05;
    // At most one of these is set; eps_rel is a fraction of R.
    std::optional<double> eps;
    std::optional<double> eps_rel;
    int N = 7;
    int samples_per_edge = 24;
    int quad_order = 24;
    std::string out_dir = ".";
    std::set<Format> formats{Format::csv, Format::json, Format::svg};
    unsigned workers = 0;

    // mode
    int cells = 3;
    int resolution = 12;

    // sweep-S
    double r_min = 0.02;
    double r_max = 0.4;
    int steps = 40;

    /// Absolute perturbation, 0 when neither eps nor eps_rel is set.
    double epsilon() const;
    Geometry geometry() const;
    bool wants(Format f) const { return formats.count(f) != 0; }

    /// Throws ConfigError on any invalid field.
    void validate() const;
};

using Overrides = std::map<std::string, std::string>;

/// Sets one flat key (the same names are used in files and for overrides). Throws ConfigError for
/// unknown keys and malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Defaults, then the key = value file (if any), then the overrides; validated.
RunConfig load_config(const std::optional<std::string>& path, const Overrides& overrides);

/// Stable one-line rendering of every field, used for the SVG provenance hash.
std::string canonical(const RunConfig& cfg);

/// 64-bit FNV-1a of a string, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

}  // namespace bubbly::cli
