#include "pstchain/output.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pstchain/errors.hpp"

namespace pstchain {

namespace {

constexpr std::array<std::string_view, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double x) { return fmt::format("{:.3f}", x); }

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * span; t += step)
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

}  // namespace

std::string format_value(double x) {
  if (!std::isfinite(x)) return fmt::format("{}", x);
  return fmt::format("{:#.12g}", x);
}

std::string series_csv(const TimeSeries& series) {
  std::string out = "tau_over_tS";
  for (const auto& c : series.columns) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += format_value(series.tau[i]);
    for (double v : series.rows[i]) out += "," + format_value(v);
    out += "\n";
  }
  return out;
}

std::string scan_csv(const ScanResult& scan) {
  std::string out;
  for (const auto& a : scan.axes) out += a + ",";
  out += "mean,stderr,n_realizations\n";
  for (const auto& p : scan.points) {
    for (double c : p.coords) out += format_value(c) + ",";
    out += fmt::format("{},{},{}\n", format_value(p.summary.mean), format_value(p.summary.standard_error),
                       p.summary.n_realizations);
  }
  return out;
}

std::string fit_csv(const FitResult& fit) {
  return fmt::format("p0,residual_rms,points_used,points_excluded\n{},{},{},{}\n", format_value(fit.p0),
                     format_value(fit.residual_rms), fit.points_used, fit.points_excluded);
}

ScanResult parse_scan_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("scan csv: empty input");
  const auto header = split(line, ',');
  if (header.size() < 4 || header[header.size() - 3] != "mean") throw IoError("scan csv: unexpected header");
  ScanResult scan;
  scan.axes.assign(header.begin(), header.end() - 3);
  const std::size_t n_axes = scan.axes.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw IoError("scan csv: ragged row '" + line + "'");
    ScanPoint p;
    try {
      for (std::size_t i = 0; i < n_axes; ++i) p.coords.push_back(std::stod(cells[i]));
      p.summary.mean = std::stod(cells[n_axes]);
      p.summary.standard_error = std::stod(cells[n_axes + 1]);
      p.summary.n_realizations = std::stoi(cells[n_axes + 2]);
    } catch (const std::logic_error&) {
      throw IoError("scan csv: non-numeric cell in '" + line + "'");
    }
    scan.points.push_back(std::move(p));
  }
  return scan;
}

std::string metadata(const RunConfig& config) {
  return emit_config(config) + "# pstchain " PSTCHAIN_VERSION "\n";
}

std::string render_svg(const TimeSeries& series, const std::vector<std::string>& columns) {
  if (series.size() == 0) throw DomainError("render_svg: empty series");
  if (columns.empty()) throw DomainError("render_svg: no columns requested");
  std::vector<std::vector<double>> ys;
  for (const auto& c : columns) ys.push_back(series.column(c));

  constexpr double width = 640, height = 400, left = 60, right = 150, top = 20, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  double x0 = series.tau.front(), x1 = series.tau.back();
  if (x1 <= x0) x1 = x0 + 1.0;
  double y0 = 0.0, y1 = 1.0;
  for (const auto& col : ys)
    for (double v : col) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  const auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  out += fmt::format("<g stroke=\"black\" fill=\"none\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></g>\n",
                     fixed(left), fixed(top), fixed(pw), fixed(ph));

  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ticks(x0, x1))
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>"
                       "<text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
                       fixed(px(t)), fixed(top + ph), fixed(top + ph + 5), fixed(top + ph + 18), fmt::format("{:g}", t));
  for (double t : ticks(y0, y1))
    out += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>"
                       "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
                       fixed(left - 5), fixed(left), fixed(py(t)), fixed(left - 8), fixed(py(t) + 4),
                       fmt::format("{:g}", t));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t / t_S</text>\n", fixed(left + pw / 2),
                     fixed(height - 10));
  out += "</g>\n";

  for (std::size_t c = 0; c < ys.size(); ++c) {
    const auto colour = kPalette[c % kPalette.size()];
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", colour);
    for (std::size_t i = 0; i < series.size(); ++i)
      out += fmt::format("{}{},{}", i ? " " : "", fixed(px(series.tau[i])), fixed(py(ys[c][i])));
    out += "\"/>\n";
    const double ly = top + 15 + 18 * static_cast<double>(c);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"1.5\"/>"
                       "<text x=\"{4}\" y=\"{5}\" font-family=\"sans-serif\" font-size=\"11\">{6}</text>\n",
                       fixed(left + pw + 10), fixed(ly), fixed(left + pw + 30), colour, fixed(left + pw + 35),
                       fixed(ly + 4), xml_escape(columns[c]));
  }
  out += "</svg>\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path metadata_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".meta";
  return p;
}

}  // namespace pstchain
