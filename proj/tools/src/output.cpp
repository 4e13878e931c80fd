#include "bubbly/cli/output.hpp"

#include "bubbly/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bubbly::cli {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0, kMargin = 60.0;

std::string f3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string header(double w, double h, const std::string& hash) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f3(w) + "\" height=\"" + f3(h) + "\" viewBox=\"0 0 " + f3(w) +
           " " + f3(h) + "\">\n<!-- config " + hash + " -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

struct Axes {
    double x0, x1, y0, y1;
    double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
    double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string frame(const Axes& a, const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream s;
    s << "<rect x=\"" << f3(kMargin) << "\" y=\"" << f3(kMargin) << "\" width=\"" << f3(kWidth - 2 * kMargin) << "\" height=\""
      << f3(kHeight - 2 * kMargin) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = a.y0 + (a.y1 - a.y0) * i / 4;
        s << "<text x=\"" << f3(kMargin - 6) << "\" y=\"" << f3(a.py(y) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
          << csv_number(std::round(y * 1e5) / 1e5) << "</text>\n";
    }
    s << "<text x=\"" << f3(kWidth / 2) << "\" y=\"" << f3(kHeight - 15) << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
    s << "<text x=\"15\" y=\"" << f3(kHeight / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << f3(kHeight / 2) << ")\">" << ylabel << "</text>\n";
    return s.str();
}

// Piecewise-linear map of t in [0, 1] onto a dark-blue to yellow ramp.
std::string ramp(double t) {
    static const std::array<std::array<double, 3>, 5> stops{
        {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                  int(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                  int(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
    return buf;
}

}  // namespace

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error("write to '" + path + "' failed");
}

void write_csv(const std::string& path, const std::vector<std::string>& head, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < head.size(); ++i) out += (i ? "," : "") + head[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_number(row[i]);
        out += "\n";
    }
    write_text(path, out);
}

std::string band_svg(const BandStructure& bs, std::optional<double> defect_line, const std::string& hash) {
    const double end = 2.0 * kPi + std::sqrt(2.0) * kPi;
    double lo = 1e300, hi = -1e300;
    for (const auto& s : bs.samples)
        if (s.ok) lo = std::min(lo, s.omega), hi = std::max(hi, s.omega);
    if (defect_line) hi = std::max(hi, *defect_line);
    if (!(hi > lo)) lo = 0.0, hi = std::max(1.0, hi);
    const double pad = 0.05 * (hi - lo);
    const Axes a{0.0, end, lo - pad, hi + pad};
    std::ostringstream s;
    s << header(kWidth, kHeight, hash) << frame(a, "Bloch vector", "frequency");
    const std::array<std::pair<double, const char*>, 4> ticks{{{0.0, "&#915;"}, {kPi, "X"}, {2 * kPi, "M"}, {end, "&#915;"}}};
    for (const auto& [x, name] : ticks) {
        s << "<line x1=\"" << f3(a.px(x)) << "\" y1=\"" << f3(kMargin) << "\" x2=\"" << f3(a.px(x)) << "\" y2=\""
          << f3(kHeight - kMargin) << "\" stroke=\"#bbbbbb\"/>\n";
        s << "<text x=\"" << f3(a.px(x)) << "\" y=\"" << f3(kHeight - kMargin + 16) << "\" font-size=\"12\" text-anchor=\"middle\">"
          << name << "</text>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (const auto& p : bs.samples)
        if (p.ok) s << f3(a.px(p.path)) << "," << f3(a.py(p.omega)) << " ";
    s << "\"/>\n";
    for (const auto& p : bs.samples)
        if (p.ok)
            s << "<circle cx=\"" << f3(a.px(p.path)) << "\" cy=\"" << f3(a.py(p.omega))
              << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
    if (defect_line)
        s << "<line x1=\"" << f3(kMargin) << "\" y1=\"" << f3(a.py(*defect_line)) << "\" x2=\"" << f3(kWidth - kMargin)
          << "\" y2=\"" << f3(a.py(*defect_line)) << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
    s << "</svg>\n";
    return s.str();
}

std::string sweep_svg(const std::vector<double>& R, const std::vector<double>& S, std::optional<double> root,
                      const std::string& hash) {
    const auto [mn, mx] = std::minmax_element(S.begin(), S.end());
    const double lo = std::min(*mn, 0.0), hi = std::max(*mx, 0.0), pad = 0.05 * (hi - lo + 1e-300);
    const Axes a{R.front(), R.back(), lo - pad, hi + pad};
    std::ostringstream s;
    s << header(kWidth, kHeight, hash) << frame(a, "R", "S(R)");
    for (int i = 0; i <= 4; ++i) {
        const double x = a.x0 + (a.x1 - a.x0) * i / 4;
        s << "<text x=\"" << f3(a.px(x)) << "\" y=\"" << f3(kHeight - kMargin + 16) << "\" font-size=\"11\" text-anchor=\"middle\">"
          << csv_number(std::round(x * 1e4) / 1e4) << "</text>\n";
    }
    s << "<line x1=\"" << f3(kMargin) << "\" y1=\"" << f3(a.py(0.0)) << "\" x2=\"" << f3(kWidth - kMargin) << "\" y2=\""
      << f3(a.py(0.0)) << "\" stroke=\"#bbbbbb\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < R.size(); ++i) s << f3(a.px(R[i])) << "," << f3(a.py(S[i])) << " ";
    s << "\"/>\n";
    if (root)
        s << "<circle cx=\"" << f3(a.px(*root)) << "\" cy=\"" << f3(a.py(0.0)) << "\" r=\"4\" fill=\"red\"/>\n"
          << "<text x=\"" << f3(a.px(*root) + 6) << "\" y=\"" << f3(a.py(0.0) - 6) << "\" font-size=\"12\">R0 = "
          << csv_number(std::round(*root * 1e4) / 1e4) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string mode_svg(const ModeField& field, const std::string& hash) {
    const int n = 2 * field.cells + 1;
    const double px = 600.0 / (n * field.resolution);
    const double side = px * n * field.resolution;
    double top = 0.0;
    for (const auto& s : field.samples) top = std::max(top, std::abs(s.u));
    if (!(top > 0.0)) top = 1.0;
    std::ostringstream s;
    s << header(side, side, hash);
    const double half = field.cells + 0.5;
    for (const auto& p : field.samples) {
        const double x = (p.x + half) * field.resolution * px - 0.5 * px;
        const double y = (half - p.y) * field.resolution * px - 0.5 * px;
        s << "<rect x=\"" << f3(x) << "\" y=\"" << f3(y) << "\" width=\"" << f3(px) << "\" height=\"" << f3(px) << "\" fill=\""
          << ramp(std::abs(p.u) / top) << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

nlohmann::ordered_json defect_report(const DefectResult& r, const Geometry& geo) {
    nlohmann::ordered_json j;
    j["spec_version"] = 1;
    j["R"] = geo.R;
    j["eps"] = geo.eps;
    j["N"] = geo.N;
    j["omega_star"] = r.omega_star;
    j["omega_eps"] = r.omega_eps ? nlohmann::ordered_json(*r.omega_eps) : nlohmann::ordered_json(nullptr);
    j["omega_eps_asymptotic"] =
        r.omega_eps_asymptotic ? nlohmann::ordered_json(*r.omega_eps_asymptotic) : nlohmann::ordered_json(nullptr);
    j["exists"] = r.exists;
    j["regime"] = to_string(r.regime);
    j["S_of_R"] = r.S_of_R;
    j["c_delta"] = r.c_delta;
    j["residual"] = r.exists ? nlohmann::ordered_json(r.residual) : nlohmann::ordered_json(nullptr);
    j["gap_ceiling"] = r.gap_ceiling;
    j["quadrature_levels"] = r.quadrature_levels;
    nlohmann::ordered_json src = nlohmann::ordered_json::array();
    // + 0.0 turns signed zeros into plain zeros.
    for (Eigen::Index i = 0; i < r.source_pair.size(); ++i)
        src.push_back({r.source_pair(i).real() + 0.0, r.source_pair(i).imag() + 0.0});
    j["source_pair"] = src;
    j["note"] = r.note;
    return j;
}

}  // namespace bubbly::cli
