#include "surfstokes/killing.hpp"

#include <cmath>
#include <sstream>

namespace surfstokes
{

FilterPolicy FilterPolicy::parse(std::string const & text)
{
  FilterPolicy p;
  auto fail = [&] { throw Error("invalid filter policy '" + text + "'"); };
  if (text == "none") {
    p.mode = FilterMode::none;
  } else if (text == "manual") {
    p.mode = FilterMode::manual;
  } else if (text == "forcing") {
    p.mode = FilterMode::forcing;
  } else if (text.rfind("known:", 0) == 0) {
    p.mode = FilterMode::known_dim;
    try {
      p.dim = std::stoi(text.substr(6));
    } catch (...) {
      fail();
    }
    if (p.dim < 0 || p.dim > 3)
      fail();
  } else if (text.rfind("auto:", 0) == 0) {
    p.mode = FilterMode::threshold;
    try {
      p.alpha = std::stod(text.substr(5));
    } catch (...) {
      fail();
    }
    if (!(p.alpha >= 1.0 && p.alpha < 2.0))
      fail();
  } else {
    fail();
  }
  return p;
}

std::string FilterPolicy::str() const
{
  std::ostringstream s;
  switch (mode) {
  case FilterMode::none:
    return "none";
  case FilterMode::manual:
    return "manual";
  case FilterMode::forcing:
    return "forcing";
  case FilterMode::known_dim:
    s << "known:" << dim;
    return s.str();
  case FilterMode::threshold:
    s << "auto:" << alpha;
    return s.str();
  }
  return "none";
}

std::vector<int> threshold_select(std::vector<double> const & lambdas, double h, double alpha)
{
  double const t = std::pow(h, alpha) - 2.0 * h * h;
  std::vector<int> J;
  for (int i = 0; i < std::min<int>(3, static_cast<int>(lambdas.size())); ++i)
    if (lambdas[i] <= t)
      J.push_back(i + 1);
  return J;
}

std::vector<int> threshold_select(EigenSet const & eigs, double h, double alpha)
{
  if (eigs.size() < 3)
    throw Error("threshold_select: need at least three eigenpairs");
  return threshold_select(eigs.values, h, alpha);
}

ForcingCriterion forcing_criterion(double lambda, double h)
{
  double const e = std::pow(h, 2.0 / 3.0);
  ForcingCriterion c;
  double const a = lambda / ((lambda + e) * (lambda + e));
  c.lhs = a;
  c.rhs = 1.0 / (lambda + h * h) - a;
  c.selected = c.lhs <= c.rhs;
  c.rearranged = lambda + 2.0 * lambda * (h * h - e) <= std::pow(h, 4.0 / 3.0);
  return c;
}

FilterReport filter_velocity(FeSystem const & system,
                             EigenSet const * eigs,
                             Coefficients const & U,
                             FilterPolicy const & policy,
                             double h)
{
  FilterReport r;
  r.policy = policy;
  r.h = h;
  if (eigs != nullptr)
    r.eigenvalues = eigs->values;
  auto need_eigs = [&](int count) {
    if (eigs == nullptr || eigs->size() < count) {
      std::ostringstream msg;
      msg << "filter_velocity: policy " << policy.str() << " needs " << count << " eigenpairs";
      throw Error(msg.str());
    }
  };
  switch (policy.mode) {
  case FilterMode::none:
    r.filtered = U;
    break;
  case FilterMode::manual:
    r.filtered = project_analytic_killing(system, U).remainder;
    for (int j = 1; j <= system.dim_killing; ++j)
      r.selected.push_back(j);
    break;
  case FilterMode::known_dim:
    if (policy.dim > 0)
      need_eigs(policy.dim);
    for (int j = 1; j <= policy.dim; ++j)
      r.selected.push_back(j);
    r.filtered = policy.dim > 0 ? project_discrete_killing(system, *eigs, r.selected, U) : U;
    break;
  case FilterMode::threshold: {
    need_eigs(3);
    r.threshold = std::pow(h, policy.alpha) - 2.0 * h * h;
    r.selected = threshold_select(*eigs, h, policy.alpha);
    for (int i = 0; i < 3; ++i)
      r.margins.push_back(r.threshold - eigs->values[i]);
    r.filtered = project_discrete_killing(system, *eigs, r.selected, U);
    break;
  }
  case FilterMode::forcing: {
    need_eigs(3);
    for (int i = 0; i < 3; ++i) {
      auto const c = forcing_criterion(eigs->values[i], h);
      r.lhs.push_back(c.lhs);
      r.rhs.push_back(c.rhs);
      r.margins.push_back(c.rhs - c.lhs);
      r.rearranged.push_back(c.rearranged);
      if (c.selected)
        r.selected.push_back(i + 1);
    }
    r.filtered = project_discrete_killing(system, *eigs, r.selected, U);
    break;
  }
  }
  return r;
}

ForcingPipelineResult
forcing_filter_pipeline(FeSystem const & system, EigenSet const & eigs, double h, VectorXd const * load)
{
  VectorXd const & f = load != nullptr ? *load : system.f_vec;
  ForcingPipelineResult out;
  out.epsilon = std::pow(h, 2.0 / 3.0);
  {
    SaddlePointSolver const solver(system, out.epsilon);
    out.U_f = solve_stokes(solver, f, system.g_vec).U;
    VectorXd const fw = f - out.epsilon * (system.Mv * out.U_f);
    out.W = solve_stokes(solver, fw, system.g_vec).U;
  }
  // eigenexpansion of W over the computed modes
  out.W_expansion = Coefficients::Zero(system.n_velocity());
  for (int i = 0; i < eigs.size(); ++i) {
    double const lam = eigs.values[i];
    double const s = lam / ((lam + out.epsilon) * (lam + out.epsilon));
    out.W_expansion += s * f.dot(eigs.vectors[i]) * eigs.vectors[i];
  }
  {
    SaddlePointSolver const solver(system, h * h);
    out.U_h2 = solve_stokes(solver, f, system.g_vec).U;
  }
  FilterPolicy policy;
  policy.mode = FilterMode::forcing;
  out.report = filter_velocity(system, &eigs, out.U_h2, policy, h);
  return out;
}

} // namespace surfstokes
