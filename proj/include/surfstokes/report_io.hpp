#pragma once

#include "surfstokes/killing.hpp"

#include <array>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace surfstokes
{

inline constexpr char const * csv_header = "level,h,energy,l2,h1,pk_norm,lam1,lam2,lam3,Jh,eoc_energy,eoc_l2";

struct LevelRow
{
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  int level = 0;
  double h = nan;
  double energy = nan;
  double l2 = nan;
  double h1 = nan;
  double pk_norm = nan;
  std::array<double, 3> lam{nan, nan, nan};
  std::string Jh = "na"; ///< "1;2;3", "none" for the empty set, "na" without filtering
  double eoc_energy = nan;
  double eoc_l2 = nan;
};

struct ErrorReport
{
  std::vector<LevelRow> rows;

  /// Fill the EOC columns from consecutive rows.
  void compute_eoc();
};

/// log(e0 / e1) / log(h0 / h1)
[[nodiscard]] double eoc(double e0, double e1, double h0, double h1);

[[nodiscard]] std::string format_indices(std::vector<int> const & J);

void write_csv(ErrorReport const & report, std::filesystem::path const & path);
[[nodiscard]] ErrorReport read_csv(std::filesystem::path const & path);

/// One JSON object per line.
[[nodiscard]] std::string filter_report_json(FilterReport const & report);
void write_json_lines(std::vector<FilterReport> const & reports, std::filesystem::path const & path);

struct PlotSeries
{
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log plot with dashed slope guides.
void write_loglog_svg(std::filesystem::path const & path,
                      std::string const & title,
                      std::string const & ylabel,
                      std::vector<PlotSeries> const & series,
                      std::vector<double> const & slopes = {1.0, 2.0});

} // namespace surfstokes
