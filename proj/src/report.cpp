// Copyright 2026 The ClusterForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clusterforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "clusterforge/errors.hpp"
#include "clusterforge/objectives.hpp"

namespace clusterforge {
namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string exact(double v) { return format("%.17g", v); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

int recipe_count(const std::string& recipe) {
  const auto colon = recipe.find(':');
  return colon == std::string::npos ? -1 : std::atoi(recipe.c_str() + colon + 1);
}

}  // namespace

std::vector<Plateau> detect_plateaus(const std::vector<RunRecord>& records, double tolerance) {
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.converged) values.push_back(r.success);
  }
  std::sort(values.begin(), values.end());
  std::vector<Plateau> plateaus;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (plateaus.empty() || values[i] - plateaus.back().high > tolerance) {
      if (!plateaus.empty()) plateaus.back().value = sum / plateaus.back().count;
      plateaus.push_back({values[i], values[i], values[i], 0});
      sum = 0.0;
    }
    auto& p = plateaus.back();
    p.high = values[i];
    ++p.count;
    sum += values[i];
  }
  if (!plateaus.empty()) plateaus.back().value = sum / plateaus.back().count;
  return plateaus;
}

std::string fraction_label(double value) {
  if (value > 0.0) {
    const double inverse = 1.0 / value;
    const double rounded = std::round(inverse);
    if (rounded >= 1.0 && std::abs(inverse - rounded) <= 1e-9 * rounded) {
      return "1/" + format("%.0f", rounded);
    }
  }
  return format("%.6g", value);
}

std::string plateau_label(double value, std::optional<double> reference) {
  int decimals = 4;
  if (value > 0.0) decimals = std::max(4, 3 - static_cast<int>(std::floor(std::log10(value))));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string label = buf;
  if (reference) label += " (ref: " + fraction_label(*reference) + ")";
  return label;
}

std::string render_csv(const std::vector<RunRecord>& sorted) {
  std::ostringstream out;
  out << "rank,cycle,s,f,sv_ratio,converged\n";
  int rank = 0;
  for (const auto& r : sorted) {
    out << ++rank << ',' << r.cycle << ',' << exact(r.success) << ',' << exact(r.fidelity) << ','
        << exact(r.sv_ratio) << ',' << (r.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CsvRow> rows;
  if (!std::getline(in, line) || line != "rank,cycle,s,f,sv_ratio,converged") {
    throw ConfigError("csv: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 6) throw ConfigError("csv: expected 6 fields in \"" + line + "\"");
    rows.push_back({std::stoi(fields[0]), std::stoi(fields[1]), std::strtod(fields[2].c_str(), nullptr),
                    std::strtod(fields[3].c_str(), nullptr), std::strtod(fields[4].c_str(), nullptr),
                    fields[5] == "1"});
  }
  return rows;
}

std::string render_svg(const std::vector<RunRecord>& sorted, const std::vector<Plateau>& plateaus,
                       const std::string& title, std::optional<double> reference) {
  constexpr double width = 720, height = 440;
  constexpr double left = 70, right = 190, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double y_max = 0.0;
  for (const auto& r : sorted) y_max = std::max(y_max, r.success);
  if (reference) y_max = std::max(y_max, *reference);
  y_max = y_max > 0.0 ? y_max * 1.1 : 1.0;
  const auto n = static_cast<double>(std::max<std::size_t>(sorted.size(), 1));
  auto x_of = [&](double rank) { return left + (n <= 1 ? 0.5 : (rank - 1) / (n - 1)) * plot_w; };
  auto y_of = [&](double s) { return top + plot_h * (1.0 - s / y_max); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"24\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double s = y_max * t / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y_of(s) + 4 << "\" text-anchor=\"end\">"
        << format("%.4g", s) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">cycle rank (ascending s)</text>\n";
  svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">success probability s</text>\n";

  for (std::size_t i = 0; i < plateaus.size(); ++i) {
    const auto& p = plateaus[i];
    const bool topmost = i + 1 == plateaus.size();
    const double y = y_of(p.value);
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\""
        << y << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << left + plot_w + 6 << "\" y=\"" << y + 4 << "\">"
        << xml_escape(plateau_label(p.value, topmost ? reference : std::nullopt)) << " x"
        << p.count << "</text>\n";
  }
  int rank = 0;
  for (const auto& r : sorted) {
    ++rank;
    svg << "<circle cx=\"" << x_of(rank) << "\" cy=\"" << y_of(r.success) << "\" r=\"3.5\" "
        << (r.converged ? "fill=\"#1f77b4\"" : "fill=\"none\" stroke=\"#d62728\"") << "/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::optional<double> cz_fusion_success(const std::string& input_recipe,
                                        const std::string& target_recipe) {
  const int n = recipe_count(target_recipe);
  if (!target_recipe.starts_with("cluster:") || n < 2) return std::nullopt;
  if (input_recipe == "plus:" + std::to_string(n)) return std::pow(1.0 / 9.0, n - 1);
  if (n % 2 == 0 && n >= 4 && input_recipe == "bell:" + std::to_string(n / 2)) {
    return std::pow(1.0 / 9.0, n / 2 - 1);
  }
  return std::nullopt;
}

TableEntry summarize_experiment(const ExperimentSpec& spec, const std::vector<RunRecord>& records) {
  TableEntry e;
  e.experiment = spec.name;
  e.input_recipe = spec.input_recipe;
  e.target_recipe = spec.target_recipe;
  e.reference = reference_success(spec.input_recipe, spec.target_recipe);
  e.cz_fusion = cz_fusion_success(spec.input_recipe, spec.target_recipe);
  const Objective objective(spec);
  for (const auto& r : records) {
    ++e.total;
    ObjectiveReport fresh;
    try {
      fresh = objective.report(record_matrix(r, spec), 0.0);
    } catch (const DegenerateOutputError&) {
      continue;
    }
    if (1.0 - fresh.fidelity > spec.fidelity_tolerance) continue;
    ++e.accepted;
    if (!e.best_success || fresh.success > *e.best_success) {
      e.best_success = fresh.success;
      e.best_fidelity = fresh.fidelity;
      e.best_cycle = r.cycle;
    }
  }
  return e;
}

std::string render_table(const std::vector<TableEntry>& entries) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-10s %-11s %12s %12s %10s %11s %10s %9s\n", "experiment",
                "input", "target", "best_s", "1-f", "reference", "rel_dev", "cz_fusion", "gain");
  out << line;
  for (const auto& e : entries) {
    const std::string best = e.best_success ? format("%.6f", *e.best_success) : "none";
    const std::string defect = e.best_success ? format("%.2e", 1.0 - e.best_fidelity) : "-";
    const std::string ref = e.reference ? fraction_label(*e.reference) : "n/a";
    const std::string dev = e.best_success && e.reference
                                ? format("%+.2e", (*e.best_success - *e.reference) / *e.reference)
                                : "-";
    const std::string cz = e.cz_fusion ? fraction_label(*e.cz_fusion) : "n/a";
    const std::string gain = e.best_success && e.cz_fusion
                                 ? format("%.3f", *e.best_success / *e.cz_fusion)
                                 : "-";
    std::snprintf(line, sizeof line, "%-16s %-10s %-11s %12s %12s %10s %11s %10s %9s\n",
                  e.experiment.c_str(), e.input_recipe.c_str(), e.target_recipe.c_str(),
                  best.c_str(), defect.c_str(), ref.c_str(), dev.c_str(), cz.c_str(), gain.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace clusterforge
