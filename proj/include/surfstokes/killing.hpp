#pragma once

#include "surfstokes/solver.hpp"

#include <string>
#include <vector>

namespace surfstokes
{

enum class FilterMode
{
  none,
  manual,    ///< remove the analytic Killing fields
  known_dim, ///< remove the first d discrete eigenfunctions
  threshold, ///< remove modes with Lambda_i <= h^alpha - 2 h^2
  forcing    ///< filtering pipeline for forcing with Killing components
};

struct FilterPolicy
{
  FilterMode mode = FilterMode::none;
  int dim = 0;
  double alpha = 1.5;

  /// none | manual | known:<d> | auto:<alpha> | forcing
  [[nodiscard]] static FilterPolicy parse(std::string const & text);
  [[nodiscard]] std::string str() const;
  [[nodiscard]] bool needs_eigen() const
  {
    return mode == FilterMode::known_dim || mode == FilterMode::threshold || mode == FilterMode::forcing;
  }
};

struct FilterReport
{
  FilterPolicy policy;
  int level = -1;
  double h = 0.0;
  std::vector<int> selected; ///< 1-based J_h
  std::vector<double> eigenvalues;
  double threshold = 0.0;      ///< h^alpha - 2 h^2 (threshold mode)
  std::vector<double> margins; ///< threshold - Lambda_i (threshold mode), rhs - lhs (forcing mode)
  std::vector<double> lhs;     ///< forcing criterion left side per mode
  std::vector<double> rhs;     ///< forcing criterion right side per mode
  std::vector<bool> rearranged; ///< printed rearrangement Lambda + 2 Lambda (h^2 - h^{2/3}) <= h^{4/3}
  Coefficients filtered;
};

/// J = {i in 1..3 : Lambda_i <= h^alpha - 2 h^2}.
[[nodiscard]] std::vector<int> threshold_select(std::vector<double> const & lambdas, double h, double alpha);
[[nodiscard]] std::vector<int> threshold_select(EigenSet const & eigs, double h, double alpha);

/// Forcing criterion: Lambda/(Lambda+e)^2 <= 1/(Lambda+h^2) - Lambda/(Lambda+e)^2, e = h^{2/3}.
struct ForcingCriterion
{
  double lhs = 0.0;
  double rhs = 0.0;
  bool selected = false;
  bool rearranged = false;
};
[[nodiscard]] ForcingCriterion forcing_criterion(double lambda, double h);

[[nodiscard]] FilterReport filter_velocity(FeSystem const & system,
                                           EigenSet const * eigs,
                                           Coefficients const & U,
                                           FilterPolicy const & policy,
                                           double h);

struct ForcingPipelineResult
{
  double epsilon = 0.0; ///< h^{2/3}
  Coefficients U_f;     ///< solution with eps = h^{2/3}; eps U_f estimates P_K f
  Coefficients W;       ///< load f - eps Mv U_f, eps = h^{2/3}
  Coefficients W_expansion; ///< sum over computed modes of Lambda/(Lambda+eps)^2 (f, U_i) U_i
  Coefficients U_h2;    ///< eps = h^2
  FilterReport report;
};

/// eps U_f ~ P_K f, W from the reduced load, then the forcing criterion per
/// mode.  `load` replaces f_vec when given.
[[nodiscard]] ForcingPipelineResult forcing_filter_pipeline(FeSystem const & system,
                                                            EigenSet const & eigs,
                                                            double h,
                                                            VectorXd const * load = nullptr);

} // namespace surfstokes
