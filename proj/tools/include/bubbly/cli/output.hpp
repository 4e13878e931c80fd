#pragma once

#include "bubbly/defect.hpp"
#include "bubbly/spectral.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bubbly::cli {

/// 12 significant digits, '.' decimal separator.
std::string csv_number(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
void write_text(const std::string& path, const std::string& text);

/// Dispersion plot of the first band along Gamma-X-M-Gamma, with an optional horizontal defect line.
std::string band_svg(const BandStructure& bs, std::optional<double> defect_line, const std::string& config_hash);

std::string sweep_svg(const std::vector<double>& R, const std::vector<double>& S, std::optional<double> root,
                      const std::string& config_hash);

/// |u| heat map, one rect per sample.
std::string mode_svg(const ModeField& field, const std::string& config_hash);

nlohmann::ordered_json defect_report(const DefectResult& r, const Geometry& geo);

}  // namespace bubbly::cli
