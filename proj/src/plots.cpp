#include "banditrec/plots.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string header(const std::string& title) {
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight, kWidth, kHeight);
  s += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, kHeight);
  s += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                   kWidth / 2.0, xml_escape(title));
  return s;
}

// Axes with a [0, 1] y range and gridlines every 0.2.
std::string axes() {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string s;
  for (int t = 0; t <= 5; ++t) {
    const double v = t / 5.0;
    const double y = y0 - v * (y0 - y1);
    s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>\n", x0, y, x1, y);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.1f}</text>\n", x0 - 6, y + 4, v);
  }
  s += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", x0, y0, y1);
  s += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n", x0, y0, x1);
  return s;
}

std::string legend(const std::vector<std::string>& names) {
  std::string s;
  const double x = kWidth - kRight + 15;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(i);
    s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", x, y - 10, colour(i));
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", x + 18, y, xml_escape(names[i]));
  }
  return s;
}

std::string no_data() {
  return fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" fill=\"#888888\">no data</text>\n",
                     (kLeft + kWidth - kRight) / 2.0, (kTop + kHeight - kBottom) / 2.0);
}

double y_of(double v) {
  const double y0 = kHeight - kBottom, y1 = kTop;
  return y0 - std::clamp(v, 0.0, 1.0) * (y0 - y1);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series) {
  std::string s = header(title) + axes();
  bool any = false;
  const double plot_w = kWidth - kRight - kLeft;
  const double group_w = categories.empty() ? plot_w : plot_w / static_cast<double>(categories.size());
  const double bar_w = series.empty() ? 0.0 : group_w * 0.8 / static_cast<double>(series.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c);
    const double label_y = kHeight - kBottom + (c % 2 == 0 ? 16.0 : 30.0);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", gx + group_w / 2.0,
                     label_y, xml_escape(categories[c]));
    for (std::size_t p = 0; p < series.size(); ++p) {
      if (c >= series[p].values.size() || !series[p].values[c]) continue;
      any = true;
      const double x = gx + group_w * 0.1 + bar_w * static_cast<double>(p);
      const double y = y_of(*series[p].values[c]);
      s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n", x, y,
                       bar_w, kHeight - kBottom - y, colour(p));
    }
  }
  if (!any) s += no_data();
  std::vector<std::string> names;
  for (const auto& b : series) names.push_back(b.name);
  s += legend(names);
  return s + "</svg>\n";
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<LineSeries>& series) {
  std::string s = header(title) + axes();
  std::size_t n = 0;
  for (const auto& l : series) n = std::max(n, l.values.size());
  const double plot_w = kWidth - kRight - kLeft;
  auto x_of = [&](std::size_t i) {
    return n <= 1 ? kLeft + plot_w / 2.0 : kLeft + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", x_of(i),
                     kHeight - kBottom + 16, i + 1);
  }
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", kLeft + plot_w / 2.0,
                   kHeight - kBottom + 36, xml_escape(x_label));
  bool any = false;
  for (std::size_t p = 0; p < series.size(); ++p) {
    std::string points;
    for (std::size_t i = 0; i < series[p].values.size(); ++i) {
      if (!series[p].values[i]) continue;
      any = true;
      const double x = x_of(i), y = y_of(*series[p].values[i]);
      points += fmt::format("{}{:.1f},{:.1f}", points.empty() ? "" : " ", x, y);
      s += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n", x, y, colour(p));
    }
    if (!points.empty()) {
      s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", points,
                       colour(p));
    }
  }
  if (!any) s += no_data();
  std::vector<std::string> names;
  for (const auto& l : series) names.push_back(l.name);
  s += legend(names);
  return s + "</svg>\n";
}

std::vector<std::filesystem::path> emit_plots(std::span<const EvaluationReport> reports,
                                              const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<PolicyKind> order;
  std::map<PolicyKind, std::vector<const EvaluationReport*>> by_policy;
  std::vector<std::string> categories;
  for (const auto& r : reports) {
    if (by_policy[r.policy].empty()) order.push_back(r.policy);
    by_policy[r.policy].push_back(&r);
    if (categories.empty()) categories = r.arm_names;
  }

  std::vector<BarSeries> bars;
  for (PolicyKind p : order) {
    BarSeries b{std::string(to_string(p)), {}};
    for (std::size_t a = 0; a < categories.size(); ++a) {
      ArmTally t;
      for (const auto* r : by_policy[p]) {
        if (a < r->arms.size()) {
          t.matched += r->arms[a].matched;
          t.rewarded += r->arms[a].rewarded;
        }
      }
      b.values.push_back(t.mean_reward());
    }
    bars.push_back(std::move(b));
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    written.push_back(out_dir / name);
    write_file(written.back(), body);
  };
  emit("expected_rewards.svg", bar_chart_svg("Average expected reward per strategy", categories, bars));

  using Field = std::optional<double> MetricPoint::*;
  const std::tuple<const char*, const char*, Field> metrics[] = {
      {"auc", "AUC", &MetricPoint::auc},
      {"ctr", "CTR", &MetricPoint::ctr},
      {"precision", "Precision", &MetricPoint::precision},
      {"recall", "Recall", &MetricPoint::recall}};
  for (const auto& [name, label, field] : metrics) {
    std::vector<LineSeries> lines;
    for (PolicyKind p : order) {
      LineSeries l{std::string(to_string(p)), {}};
      std::size_t n = 0;
      for (const auto* r : by_policy[p]) n = std::max(n, r->curve.size());
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto* r : by_policy[p]) {
          if (k < r->curve.size() && r->curve[k].*field) {
            sum += *(r->curve[k].*field);
            ++count;
          }
        }
        l.values.push_back(count == 0 ? std::nullopt : std::optional<double>(sum / static_cast<double>(count)));
      }
      lines.push_back(std::move(l));
    }
    emit(fmt::format("metric_{}.svg", name), line_chart_svg(fmt::format("{} at k", label), "k", lines));
  }
  return written;
}

}  // namespace banditrec
