#pragma once

#include "surfstokes/measure.hpp"
#include "surfstokes/report_io.hpp"

#include <filesystem>
#include <optional>

namespace surfstokes
{

struct RunConfig
{
  double c = 1.0;
  int level_min = 2;
  int level_max = 5;
  double alpha = 2.0; ///< eps = h^alpha unless fixed_epsilon is set
  std::optional<double> fixed_epsilon;
  double rho = 10.0;
  double jitter = 0.1; ///< base vertex jitter of the icosphere family
  unsigned seed = 1;
  FilterPolicy filter;
  double kappa = 0.0; ///< forcing f + kappa k_1
  bool compute_eigen = true;
  int eigen_count = 3;
  std::filesystem::path out; ///< empty: nothing written
  bool dump_mesh = false;
  bool verbose = false;
};

struct LevelResult
{
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  int level = 0;
  double h = 0.0;
  MeshMetrics metrics;
  int n_velocity = 0;
  double epsilon = 0.0;
  std::vector<double> eigenvalues;
  ErrorNorms errors;     ///< of the reported (filtered) velocity
  ErrorNorms unfiltered; ///< of U^eps before filtering
  double pk_norm = nan;  ///< || P_K U^eps || before filtering
  FilterReport filter;
  double pk_f_error = nan; ///< forcing mode: || eps U_f - P_K f ||_{L2(Gamma)}
  double seconds = 0.0;
};

struct StudyResult
{
  RunConfig config;
  std::vector<LevelResult> levels;
  ErrorReport report;
  std::vector<FilterReport> filters;
};

/// Mesh of the study family at one level.
[[nodiscard]] TriSurfaceMesh study_mesh(RunConfig const & config, int level);

/// (4 fine - coarse) / 3
[[nodiscard]] double richardson(double coarse, double fine);

[[nodiscard]] LevelResult run_level(RunConfig const & config, int level, AnalyticKilling const & killing);

/// Runs every level and writes report.csv, report.json, plot_<metric>.svg
/// (and mesh_L<k>.off) when config.out is set.
[[nodiscard]] StudyResult convergence_study(RunConfig const & config);

struct EigenStudy
{
  std::vector<int> levels;
  std::vector<double> h;
  std::vector<std::vector<double>> lambda;
  std::vector<double> extrapolated; ///< from the two finest levels
};

[[nodiscard]] EigenStudy eigen_study(RunConfig const & config);

struct FilterComparison
{
  StudyResult none;
  StudyResult manual;
  StudyResult automatic; ///< config.filter, or forcing pipeline with kappa != 0
};

/// Runs the same levels unfiltered, with manual filtering and with the policy
/// of config.filter.
[[nodiscard]] FilterComparison killing_filter_study(RunConfig const & config);

void write_outputs(StudyResult const & study, std::filesystem::path const & dir);

} // namespace surfstokes
