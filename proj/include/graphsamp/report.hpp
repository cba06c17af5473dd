#pragma once

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "graphsamp/error.hpp"

namespace graphsamp {

// One Monte-Carlo cell of an experiment. `status` is "ok" or the message of
// the error that stopped the cell, in which case the mse fields are NaN.
struct ResultRow {
  std::string graph_kind;
  int n = 0;
  std::string strategy;
  double beta = 0.0;
  double sigma2 = 0.0;
  int m = 0;
  int kappa = 0;
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
  bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "graph_kind,n,strategy,beta,sigma2,m,kappa,mse_mean,mse_stderr,trials,seed,status";

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("bad number in csv: " + std::string(s));
  return v;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename T>
T parse_integer(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("bad integer in csv: " + std::string(s));
  return v;
}

// RFC 4180 records; tolerates a missing final newline.
inline std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      records.push_back(std::move(record));
      record.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw IoError("unterminated quoted csv field");
  if (field_started || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace detail

inline std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += "\r\n";
  for (const auto& r : rows) {
    out += detail::csv_field(r.graph_kind) + ',' + std::to_string(r.n) + ',' + detail::csv_field(r.strategy) + ',' +
           format_double(r.beta) + ',' + format_double(r.sigma2) + ',' + std::to_string(r.m) + ',' +
           std::to_string(r.kappa) + ',' + format_double(r.mse_mean) + ',' + format_double(r.mse_stderr) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.seed) + ',' + detail::csv_field(r.status) + "\r\n";
  }
  return out;
}

inline std::vector<ResultRow> parse_results_csv(std::string_view text) {
  auto records = detail::parse_csv_records(text);
  if (records.empty()) throw IoError("empty results csv");
  std::string header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
  if (header != kCsvHeader) throw IoError("unexpected results csv header: " + header);
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 12) throw IoError("results csv line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.graph_kind = f[0];
    r.n = detail::parse_integer<int>(f[1]);
    r.strategy = f[2];
    r.beta = parse_double(f[3]);
    r.sigma2 = parse_double(f[4]);
    r.m = detail::parse_integer<int>(f[5]);
    r.kappa = detail::parse_integer<int>(f[6]);
    r.mse_mean = parse_double(f[7]);
    r.mse_stderr = parse_double(f[8]);
    r.trials = detail::parse_integer<int>(f[9]);
    r.seed = detail::parse_integer<std::uint64_t>(f[10]);
    r.status = f[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_results_csv(buf.str());
}

inline nlohmann::json row_to_json(const ResultRow& r) {
  // doubles go through format_double so NaN survives the round trip
  return {{"graph_kind", r.graph_kind}, {"n", r.n},
          {"strategy", r.strategy},     {"beta", format_double(r.beta)},
          {"sigma2", format_double(r.sigma2)}, {"m", r.m},
          {"kappa", r.kappa},           {"mse_mean", format_double(r.mse_mean)},
          {"mse_stderr", format_double(r.mse_stderr)}, {"trials", r.trials},
          {"seed", r.seed},             {"status", r.status}};
}

inline ResultRow row_from_json(const nlohmann::json& j) {
  ResultRow r;
  r.graph_kind = j.at("graph_kind").get<std::string>();
  r.n = j.at("n").get<int>();
  r.strategy = j.at("strategy").get<std::string>();
  r.beta = parse_double(j.at("beta").get<std::string>());
  r.sigma2 = parse_double(j.at("sigma2").get<std::string>());
  r.m = j.at("m").get<int>();
  r.kappa = j.at("kappa").get<int>();
  r.mse_mean = parse_double(j.at("mse_mean").get<std::string>());
  r.mse_stderr = parse_double(j.at("mse_stderr").get<std::string>());
  r.trials = j.at("trials").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string strategy_color(std::string_view s) {
  if (s == "uniform") return "#1f77b4";
  if (s == "leverage") return "#ff7f0e";
  if (s == "sqrt_leverage") return "#9467bd";
  if (s == "degree") return "#d62728";
  if (s == "optimal") return "#2ca02c";
  return "#7f7f7f";
}

inline std::string xml_escape(std::string_view s) {
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

inline std::string fmt(double v, int precision = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << v;
  return s.str();
}

}  // namespace detail

// Log-log MSE against m. One panel per (graph, beta, sigma2), one polyline
// per strategy. Cells that failed or have nonpositive mse are left out.
inline std::string render_svg(const std::vector<ResultRow>& rows) {
  using Panel = std::tuple<std::string, double, double>;
  std::map<Panel, std::map<std::string, std::vector<std::pair<double, double>>>> panels;
  std::vector<std::string> strategy_order;
  for (const auto& r : rows) {
    if (std::find(strategy_order.begin(), strategy_order.end(), r.strategy) == strategy_order.end())
      strategy_order.push_back(r.strategy);
    auto& series = panels[{r.graph_kind, r.beta, r.sigma2}][r.strategy];
    if (r.ok() && r.mse_mean > 0.0 && std::isfinite(r.mse_mean)) series.emplace_back(r.m, r.mse_mean);
  }

  constexpr double pw = 360, ph = 260, ml = 60, mr = 15, mt = 30, mb = 45;
  const int cols = std::max<int>(1, std::min<int>(2, static_cast<int>(panels.size())));
  const int rows_n = std::max<int>(1, (static_cast<int>(panels.size()) + cols - 1) / cols);
  const double legend_h = 24.0;
  const double width = cols * pw, height = rows_n * ph + legend_h;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double lx = 10;
  for (const auto& s : strategy_order) {
    svg << "<line x1=\"" << lx << "\" y1=\"12\" x2=\"" << lx + 20 << "\" y2=\"12\" stroke=\""
        << detail::strategy_color(s) << "\" stroke-width=\"2\"/>";
    svg << "<text x=\"" << lx + 24 << "\" y=\"16\">" << detail::xml_escape(s) << "</text>\n";
    lx += 34 + 7.0 * static_cast<double>(s.size());
  }

  int index = 0;
  for (const auto& [key, series] : panels) {
    const auto& [graph, beta, sigma2] = key;
    const double ox = (index % cols) * pw, oy = legend_h + (index / cols) * ph;
    ++index;

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& [name, pts] : series)
      for (auto [x, y] : pts) {
        xmin = std::min(xmin, std::log10(x));
        xmax = std::max(xmax, std::log10(x));
        ymin = std::min(ymin, std::log10(y));
        ymax = std::max(ymax, std::log10(y));
      }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax - xmin < 1e-9) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin < 1e-9) ymin -= 0.5, ymax += 0.5;
    const double x0 = ox + ml, x1 = ox + pw - mr, y0 = oy + ph - mb, y1 = oy + mt;
    auto px = [&](double v) { return x0 + (std::log10(v) - xmin) / (xmax - xmin) * (x1 - x0); };
    auto py = [&](double v) { return y0 - (std::log10(v) - ymin) / (ymax - ymin) * (y0 - y1); };

    svg << "<g>\n<text x=\"" << ox + pw / 2 << "\" y=\"" << oy + 18 << "\" text-anchor=\"middle\">"
        << detail::xml_escape(graph) << ", beta=" << format_double(beta) << ", sigma2=" << format_double(sigma2)
        << "</text>\n";
    svg << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
      const double x = x0 + (d - xmin) / (xmax - xmin) * (x1 - x0);
      svg << "<text x=\"" << detail::fmt(x) << "\" y=\"" << y0 + 14 << "\" text-anchor=\"middle\">1e" << d
          << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
      const double y = y0 - (d - ymin) / (ymax - ymin) * (y0 - y1);
      svg << "<text x=\"" << x0 - 4 << "\" y=\"" << detail::fmt(y + 4) << "\" text-anchor=\"end\">1e" << d
          << "</text>\n";
    }
    svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << y0 + 32 << "\" text-anchor=\"middle\">m</text>\n";
    svg << "<text x=\"" << ox + 14 << "\" y=\"" << (y0 + y1) / 2 << "\" transform=\"rotate(-90 " << ox + 14 << ' '
        << (y0 + y1) / 2 << ")\" text-anchor=\"middle\">MSE</text>\n";
    for (const auto& name : strategy_order) {
      auto it = series.find(name);
      if (it == series.end()) continue;
      svg << "<polyline data-strategy=\"" << detail::xml_escape(name) << "\" fill=\"none\" stroke=\""
          << detail::strategy_color(name) << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < it->second.size(); ++i)
        svg << (i ? " " : "") << detail::fmt(px(it->second[i].first)) << ',' << detail::fmt(py(it->second[i].second));
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace graphsamp
