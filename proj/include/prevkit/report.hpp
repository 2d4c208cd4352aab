#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "prevkit/experiments.hpp"

// CSV, JSON and SVG output for scenario summaries and sweep rows.

namespace prevkit {

namespace detail {

// 6 significant digits, '.' decimal separator
inline std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace detail

inline const char* summary_csv_header() {
  return "N,n,pi_c,se,sp,reps,seed,mean_est,sd_est,avg_se,wald_cov,"
         "wald_width,cred_cov,cred_width";
}

inline std::string summary_csv_row(const ScenarioSummary& s) {
  using detail::fmt6;
  const ScenarioConfig& c = s.config;
  std::string out;
  out += std::to_string(c.population_size);
  out += ',' + std::to_string(c.sample_size());
  out += ',' + fmt6(c.true_prevalence);
  out += ',' + fmt6(c.kit.sensitivity);
  out += ',' + fmt6(c.kit.specificity);
  out += ',' + std::to_string(c.replications);
  out += ',' + std::to_string(c.seed);
  out += ',' + fmt6(s.mean_estimate);
  out += ',' + fmt6(s.sd_estimate);
  out += ',' + fmt6(s.avg_se);
  out += ',' + fmt6(s.wald_coverage);
  out += ',' + fmt6(s.wald_avg_width);
  out += ',' + fmt6(s.cred_coverage);
  out += ',' + fmt6(s.cred_avg_width);
  return out;
}

inline std::string summaries_to_csv(const std::vector<ScenarioSummary>& rows) {
  std::string out = summary_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += summary_csv_row(r);
    out += '\n';
  }
  return out;
}

inline nlohmann::json summary_to_json(const ScenarioSummary& s) {
  const ScenarioConfig& c = s.config;
  return {{"N", c.population_size},
          {"n", c.sample_size()},
          {"pi_c", c.true_prevalence},
          {"se", c.kit.sensitivity},
          {"sp", c.kit.specificity},
          {"reps", c.replications},
          {"seed", c.seed},
          {"mean_est", s.mean_estimate},
          {"sd_est", s.sd_estimate},
          {"avg_se", s.avg_se},
          {"wald_cov", s.wald_coverage},
          {"wald_width", s.wald_avg_width},
          {"cred_cov", s.cred_coverage},
          {"cred_width", s.cred_avg_width}};
}

inline std::string summaries_to_json(const std::vector<ScenarioSummary>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(summary_to_json(r));
  return arr.dump(2) + "\n";
}

inline const char* sweep_csv_header() {
  return "N,se_mle,se_new,se_empirical,se_fpc";
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  using detail::fmt6;
  std::string out = sweep_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.population_size);
    out += ',' + fmt6(r.se_mle);
    out += ',' + fmt6(r.se_new);
    out += ',' + fmt6(r.se_empirical);
    out += ',' + fmt6(r.se_fpc);
    out += '\n';
  }
  return out;
}

inline std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"N", r.population_size},
                   {"se_mle", r.se_mle},
                   {"se_new", r.se_new},
                   {"se_empirical", r.se_empirical},
                   {"se_fpc", r.se_fpc}});
  return arr.dump(2) + "\n";
}

inline const char* replication_csv_header() {
  return "rep,n_pos,pi_c_hat,se_pi_c,wald_lo,wald_hi,cred_lo,cred_hi";
}

inline std::string replications_to_csv(const std::vector<ReplicationRow>& rows) {
  using detail::fmt6;
  std::string out = replication_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.index);
    out += ',' + std::to_string(r.positives);
    out += ',' + fmt6(r.pi_c_hat);
    out += ',' + fmt6(r.se_pi_c);
    out += ',' + fmt6(r.wald_lower);
    out += ',' + fmt6(r.wald_upper);
    out += ',' + fmt6(r.cred_lower);
    out += ',' + fmt6(r.cred_upper);
    out += '\n';
  }
  return out;
}

// Minimal line chart: four polylines, axes, tick labels and a legend.
inline std::string sweep_to_svg(const std::vector<SweepRow>& rows) {
  constexpr int width = 760, height = 480;
  constexpr int ml = 70, mr = 160, mt = 30, mb = 50;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;

  double x_min = 1e300, x_max = -1e300, y_max = 0.0;
  for (const auto& r : rows) {
    x_min = std::min(x_min, static_cast<double>(r.population_size));
    x_max = std::max(x_max, static_cast<double>(r.population_size));
    y_max = std::max({y_max, r.se_mle, r.se_new, r.se_empirical, r.se_fpc});
  }
  if (rows.empty() || x_max == x_min) { x_min = 0; x_max = 1; }
  if (y_max == 0.0) y_max = 1.0;
  y_max *= 1.05;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return mt + (1.0 - y / y_max) * plot_h; };

  auto polyline = [&](auto field, const char* color, const char* dash) {
    std::string pts;
    for (const auto& r : rows) {
      pts += detail::fmt6(px(static_cast<double>(r.population_size)));
      pts += ',';
      pts += detail::fmt6(py(field(r)));
      pts += ' ';
    }
    std::string s = "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.5\"";
    if (dash[0]) { s += " stroke-dasharray=\""; s += dash; s += "\""; }
    s += " points=\"" + pts + "\"/>\n";
    return s;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) +
         "\" x2=\"" + std::to_string(ml) + "\" y2=\"" +
         std::to_string(height - mb) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" +
         std::to_string(height - mb) + "\" x2=\"" + std::to_string(width - mr) +
         "\" y2=\"" + std::to_string(height - mb) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_max * i / 4.0;
    svg += "<text x=\"" + detail::fmt6(px(xv)) + "\" y=\"" +
           std::to_string(height - mb + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" +
           std::to_string(static_cast<long>(xv + 0.5)) + "</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" +
           detail::fmt6(py(yv) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + detail::fmt6(yv) +
           "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(ml + static_cast<int>(plot_w) / 2) +
         "\" y=\"" + std::to_string(height - 12) +
         "\" font-size=\"12\" text-anchor=\"middle\">population size N</text>\n";
  svg += "<text x=\"16\" y=\"" + std::to_string(mt + static_cast<int>(plot_h) / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         std::to_string(mt + static_cast<int>(plot_h) / 2) +
         ")\">standard error</text>\n";

  svg += polyline([](const SweepRow& r) { return r.se_mle; }, "black", "");
  svg += polyline([](const SweepRow& r) { return r.se_new; }, "blue", "6,4");
  svg += polyline([](const SweepRow& r) { return r.se_empirical; }, "green", "2,3");
  svg += polyline([](const SweepRow& r) { return r.se_fpc; }, "gray", "1,2");

  const char* names[] = {"SE (no FPC)", "SE (new)", "empirical SD", "SE (FPC)"};
  const char* colors[] = {"black", "blue", "green", "gray"};
  for (int i = 0; i < 4; ++i) {
    const int y = mt + 20 + 22 * i;
    svg += "<line x1=\"" + std::to_string(width - mr + 12) + "\" y1=\"" +
           std::to_string(y) + "\" x2=\"" + std::to_string(width - mr + 42) +
           "\" y2=\"" + std::to_string(y) + "\" stroke=\"" + colors[i] +
           "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + std::to_string(width - mr + 48) + "\" y=\"" +
           std::to_string(y + 4) + "\" font-size=\"12\">" + names[i] +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace prevkit
