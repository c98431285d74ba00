#include "surfstokes/report_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace surfstokes
{

double eoc(double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }

void ErrorReport::compute_eoc()
{
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].eoc_energy = LevelRow::nan;
      rows[i].eoc_l2 = LevelRow::nan;
      continue;
    }
    auto const & a = rows[i - 1];
    auto & b = rows[i];
    b.eoc_energy = eoc(a.energy, b.energy, a.h, b.h);
    b.eoc_l2 = eoc(a.l2, b.l2, a.h, b.h);
  }
}

std::string format_indices(std::vector<int> const & J)
{
  if (J.empty())
    return "none";
  std::string s;
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (i > 0)
      s += ';';
    s += std::to_string(J[i]);
  }
  return s;
}

namespace
{

std::string num(double v)
{
  if (std::isnan(v))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(std::string const & s)
{
  if (s == "nan")
    return LevelRow::nan;
  return std::stod(s);
}

} // namespace

void write_csv(ErrorReport const & report, std::filesystem::path const & path)
{
  std::ofstream out(path);
  if (!out)
    throw Error("write_csv: cannot open " + path.string());
  out << csv_header << '\n';
  for (auto const & r : report.rows)
    out << r.level << ',' << num(r.h) << ',' << num(r.energy) << ',' << num(r.l2) << ',' << num(r.h1) << ','
        << num(r.pk_norm) << ',' << num(r.lam[0]) << ',' << num(r.lam[1]) << ',' << num(r.lam[2]) << ','
        << r.Jh << ',' << num(r.eoc_energy) << ',' << num(r.eoc_l2) << '\n';
}

ErrorReport read_csv(std::filesystem::path const & path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("read_csv: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != csv_header)
    throw Error("read_csv: unexpected header in " + path.string());
  ErrorReport report;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (cells.size() != 12)
      throw Error("read_csv: malformed row '" + line + "'");
    LevelRow r;
    r.level = std::stoi(cells[0]);
    r.h = parse_num(cells[1]);
    r.energy = parse_num(cells[2]);
    r.l2 = parse_num(cells[3]);
    r.h1 = parse_num(cells[4]);
    r.pk_norm = parse_num(cells[5]);
    for (int i = 0; i < 3; ++i)
      r.lam[i] = parse_num(cells[6 + i]);
    r.Jh = cells[9];
    r.eoc_energy = parse_num(cells[10]);
    r.eoc_l2 = parse_num(cells[11]);
    report.rows.push_back(r);
  }
  return report;
}

std::string filter_report_json(FilterReport const & r)
{
  nlohmann::json j;
  j["policy"] = r.policy.str();
  j["level"] = r.level;
  j["h"] = r.h;
  j["selected"] = r.selected;
  j["eigenvalues"] = r.eigenvalues;
  if (r.policy.mode == FilterMode::threshold)
    j["threshold"] = r.threshold;
  if (!r.margins.empty())
    j["margins"] = r.margins;
  if (!r.lhs.empty()) {
    j["forcing_lhs"] = r.lhs;
    j["forcing_rhs"] = r.rhs;
    j["rearranged"] = r.rearranged;
  }
  return j.dump();
}

void write_json_lines(std::vector<FilterReport> const & reports, std::filesystem::path const & path)
{
  std::ofstream out(path);
  if (!out)
    throw Error("write_json_lines: cannot open " + path.string());
  for (auto const & r : reports)
    out << filter_report_json(r) << '\n';
}

void write_loglog_svg(std::filesystem::path const & path,
                      std::string const & title,
                      std::string const & ylabel,
                      std::vector<PlotSeries> const & series,
                      std::vector<double> const & slopes)
{
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (auto const & s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.y[i])) {
        xmin = std::min(xmin, std::log10(s.x[i]));
        xmax = std::max(xmax, std::log10(s.x[i]));
        ymin = std::min(ymin, std::log10(s.y[i]));
        ymax = std::max(ymax, std::log10(s.y[i]));
      }
  if (!std::isfinite(xmin)) {
    xmin = -2;
    xmax = 0;
    ymin = -2;
    ymax = 0;
  }
  if (xmax - xmin < 1e-12)
    xmax = xmin + 1;
  if (ymax - ymin < 1e-12)
    ymax = ymin + 1;
  xmin = std::floor(xmin * 4) / 4;
  xmax = std::ceil(xmax * 4) / 4;
  ymin = std::floor(ymin * 2) / 2;
  ymax = std::ceil(ymax * 2) / 2;

  double const W = 640, H = 480, L = 80, R = 160, T = 40, Bm = 60;
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - Bm - (ly - ymin) / (ymax - ymin) * (H - T - Bm); };
  static char const * colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream out(path);
  if (!out)
    throw Error("write_loglog_svg: cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - Bm
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = std::ceil(xmin); d <= xmax + 1e-12; d += 1.0)
    out << "<text x=\"" << px(d) << "\" y=\"" << H - Bm + 18 << "\" text-anchor=\"middle\" font-size=\"12\">1e"
        << d << "</text>\n";
  for (double d = std::ceil(ymin); d <= ymax + 1e-12; d += 1.0)
    out << "<text x=\"" << L - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\" font-size=\"12\">1e" << d
        << "</text>\n";
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">h</text>\n";
  out << "<text x=\"18\" y=\"" << (T + H - Bm) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (T + H - Bm) / 2 << ")\">" << ylabel << "</text>\n";

  // slope guides anchored at the finest point of the first series
  if (!series.empty() && !series[0].x.empty()) {
    auto const & s0 = series[0];
    std::size_t k = std::min_element(s0.x.begin(), s0.x.end()) - s0.x.begin();
    if (s0.x[k] > 0.0 && s0.y[k] > 0.0) {
      double const lx0 = std::log10(s0.x[k]);
      double const ly0 = std::log10(s0.y[k]) - 0.3;
      for (double p : slopes) {
        double const lx1 = xmax;
        double const ly1 = ly0 + p * (lx1 - lx0);
        out << "<line x1=\"" << px(lx0) << "\" y1=\"" << py(ly0) << "\" x2=\"" << px(lx1) << "\" y2=\"" << py(ly1)
            << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n";
        out << "<text x=\"" << px(lx1) + 4 << "\" y=\"" << py(ly1) << "\" font-size=\"11\" fill=\"gray\">O(h^" << p
            << ")</text>\n";
      }
    }
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    auto const & s = series[si];
    char const * col = colors[si % 6];
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.y[i]))
        out << px(std::log10(s.x[i])) << ',' << py(std::log10(s.y[i])) << ' ';
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.y[i]))
        out << "<circle cx=\"" << px(std::log10(s.x[i])) << "\" cy=\"" << py(std::log10(s.y[i])) << "\" r=\"3\" fill=\""
            << col << "\"/>\n";
    out << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 + 18 * si << "\" font-size=\"12\" fill=\"" << col << "\">"
        << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

} // namespace surfstokes
