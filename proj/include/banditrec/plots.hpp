#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditrec/report.hpp"

namespace banditrec {

struct BarSeries {
  std::string name;
  std::vector<std::optional<double>> values;  // one per category
};

struct LineSeries {
  std::string name;
  std::vector<std::optional<double>> values;  // y at x = 1..n
};

// Standalone SVG documents. Missing values are left out; a chart with no
// values at all carries a "no data" note.
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series);
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<LineSeries>& series);

// expected_rewards.svg (pooled arm means per policy) and metric_{auc,ctr,
// precision,recall}.svg (fold-averaged curves per policy). Returns the paths.
std::vector<std::filesystem::path> emit_plots(std::span<const EvaluationReport> reports,
                                              const std::filesystem::path& out_dir);

}  // namespace banditrec
