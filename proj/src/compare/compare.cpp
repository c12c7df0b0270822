#include "csp/compare/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csp/util/errors.hpp"

namespace csp {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

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

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParameterError("cannot open file: " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ComparisonTable compare_series(
    const std::vector<std::pair<std::string, MeasureSeries>>& by_competition) {
  if (by_competition.empty())
    throw ParameterError("compare_series: nothing to compare");
  ComparisonTable t;
  t.measure = by_competition.front().second.name;
  std::set<int> rounds;
  for (const auto& [comp, series] : by_competition) {
    t.competitions.push_back(comp);
    for (const auto& p : series.points) rounds.insert(p.round);
  }
  t.rounds.assign(rounds.begin(), rounds.end());
  std::map<int, size_t> row_of;
  for (size_t i = 0; i < t.rounds.size(); ++i) row_of[t.rounds[i]] = i;
  t.cells.assign(t.rounds.size(),
                 std::vector<std::optional<double>>(t.competitions.size()));
  for (size_t col = 0; col < by_competition.size(); ++col) {
    const auto& series = by_competition[col].second;
    ComparisonTable::Summary s;
    bool any = false;
    for (const auto& p : series.points) {
      t.cells[row_of[p.round]][col] = p.value;
      if (!any) {
        s.first = s.min = s.max = p.value;
        any = true;
      }
      s.last = p.value;
      s.min = std::min(s.min, p.value);
      s.max = std::max(s.max, p.value);
    }
    t.summaries.push_back(s);
  }
  return t;
}

std::string table_to_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "round";
  for (const auto& c : table.competitions) out << "," << c;
  out << "\n";
  out.precision(17);
  for (size_t r = 0; r < table.rounds.size(); ++r) {
    out << table.rounds[r];
    for (const auto& cell : table.cells[r]) {
      out << ",";
      if (cell) out << *cell;
    }
    out << "\n";
  }
  return out.str();
}

std::string table_to_svg(const ComparisonTable& table) {
  constexpr int kWidth = 720, kHeight = 420;
  constexpr int kLeft = 60, kRight = 160, kTop = 40, kBottom = 40;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr size_t kNColors = sizeof(kColors) / sizeof(kColors[0]);

  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto& row : table.cells)
    for (const auto& cell : row)
      if (cell) {
        if (!any) {
          lo = hi = *cell;
          any = true;
        }
        lo = std::min(lo, *cell);
        hi = std::max(hi, *cell);
      }
  if (!any) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const int rmin = table.rounds.empty() ? 0 : table.rounds.front();
  const int rmax = table.rounds.empty() ? 1 : table.rounds.back();
  const double rspan = rmax > rmin ? rmax - rmin : 1.0;

  auto sx = [&](int round) {
    return kLeft + plot_w * (round - rmin) / rspan;
  };
  auto sy = [&](double v) { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(table.measure) << "</text>\n";
  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + (int)plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + (int)plot_h
      << "\" x2=\"" << kLeft + (int)plot_w << "\" y2=\"" << kTop + (int)plot_h
      << "\" stroke=\"black\"/>\n";
  // axis labels: min/max of each axis
  svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fixed(hi, 3) << "</text>\n";
  svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + (int)plot_h + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fixed(lo, 3) << "</text>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << rmin << "</text>\n";
  svg << "<text x=\"" << kLeft + (int)plot_w << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << rmax << "</text>\n";

  for (size_t col = 0; col < table.competitions.size(); ++col) {
    const char* color = kColors[col % kNColors];
    std::ostringstream pts;
    for (size_t r = 0; r < table.rounds.size(); ++r) {
      const auto& cell = table.cells[r][col];
      if (!cell) continue;
      if (pts.tellp() > 0) pts << " ";
      pts << fixed(sx(table.rounds[r]), 2) << "," << fixed(sy(*cell), 2);
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
    // legend
    const int ly = kTop + 16 * static_cast<int>(col);
    svg << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly
        << "\" x2=\"" << kWidth - kRight + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(table.competitions[col]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_report(const std::vector<ComparisonTable>& tables,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
       << "<title>comparison report</title>\n"
       << "<style>body{font-family:sans-serif;max-width:900px;margin:2em "
          "auto}table{border-collapse:collapse}td,th{border:1px solid "
          "#ccc;padding:4px 8px;text-align:right}th{background:#f2f2f2}"
          "</style>\n</head>\n<body>\n<h1>comparison report</h1>\n";
  for (const auto& t : tables) {
    const std::string csv = table_to_csv(t);
    const std::string svg = table_to_svg(t);
    {
      std::ofstream out(fs::path(out_dir) / (t.measure + ".csv"),
                        std::ios::binary);
      out << csv;
    }
    {
      std::ofstream out(fs::path(out_dir) / (t.measure + ".svg"),
                        std::ios::binary);
      out << svg;
    }
    html << "<h2>" << xml_escape(t.measure) << "</h2>\n" << svg;
    html << "<table>\n<tr><th>competition</th><th>first</th><th>last</th>"
         << "<th>min</th><th>max</th></tr>\n";
    for (size_t i = 0; i < t.competitions.size(); ++i) {
      const auto& s = t.summaries[i];
      html << "<tr><td>" << xml_escape(t.competitions[i]) << "</td><td>"
           << fixed(s.first, 4) << "</td><td>" << fixed(s.last, 4)
           << "</td><td>" << fixed(s.min, 4) << "</td><td>" << fixed(s.max, 4)
           << "</td></tr>\n";
    }
    html << "</table>\n";
  }
  html << "</body>\n</html>\n";
  std::ofstream out(fs::path(out_dir) / "index.html", std::ios::binary);
  out << html.str();
}

std::vector<MeasureSeries> load_analysis_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw SchemaError("malformed manifest " + manifest_path.string() + ": " +
                      e.what());
  }
  std::vector<MeasureSeries> out;
  for (const auto& name_j : manifest.value("series", json::array())) {
    const std::string name = name_j.get<std::string>();
    out.push_back(
        series_from_csv(name, read_file(fs::path(dir) / (name + ".csv"))));
  }
  return out;
}

}  // namespace csp
