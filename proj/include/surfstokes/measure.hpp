#pragma once

#include "surfstokes/assembly.hpp"

#include <functional>

namespace surfstokes
{

/// Tangent field on gamma, evaluated at points of gamma.
using GammaField = std::function<Vec3(Vec3 const & y)>;

/// Quadrature on gamma: a degree-4 composite rule on a fine polyhedral
/// surface, lifted by P with the exact area ratio mu.
class GammaQuadrature
{
public:
  explicit GammaQuadrature(Ellipsoid const & surface, int level = 4, int sublevels = 2);

  [[nodiscard]] double integrate(std::function<double(Vec3 const &)> const & fn) const;
  [[nodiscard]] std::vector<Vec3> const & points() const { return points_; }
  [[nodiscard]] std::vector<double> const & weights() const { return weights_; }

private:
  std::vector<Vec3> points_;
  std::vector<double> weights_;
};

/// L2(gamma) projection onto the analytic Killing fields.
class AnalyticKilling
{
public:
  AnalyticKilling(Ellipsoid const & surface, GammaQuadrature const & quad);

  [[nodiscard]] int dim() const { return basis_.dim(); }
  [[nodiscard]] KillingBasis const & basis() const { return basis_; }
  [[nodiscard]] MatrixXd const & gram() const { return gram_; }
  /// Coefficients of P_K v in the basis k_j.
  [[nodiscard]] VectorXd coefficients(GammaField const & v) const;
  [[nodiscard]] GammaField projection(GammaField const & v) const;
  /// v - P_K v
  [[nodiscard]] GammaField remainder(GammaField const & v) const;

private:
  KillingBasis basis_;
  GammaQuadrature const & quad_;
  MatrixXd gram_;
};

struct ErrorNorms
{
  double l2 = 0.0;     ///< || u_bar - U ||_{L2(Gamma)}
  double energy = 0.0; ///< || Def_Gamma,h (u_bar - U) ||
  double h1 = 0.0;     ///< broken || grad_Gamma (u_bar - U) ||
};

/// Errors on Gamma against u_bar = piola_pullback(u o P), derivatives of
/// u_bar by fourth-order central differences along each face.
[[nodiscard]] ErrorNorms measure_errors(FeSystem const & system,
                                        Ellipsoid const & surface,
                                        Coefficients const & U,
                                        GammaField const & exact);

/// || U ||_{L2(Gamma)}
[[nodiscard]] double l2_norm(FeSystem const & system, Coefficients const & U);

/// || P_K U || from k_gram and the Gamma Gram matrix of the analytic fields.
[[nodiscard]] double pk_norm(FeSystem const & system, Coefficients const & U);

/// Broken norms for the discrete Korn ratio:
/// ||q||_{H1_h}^2 = sum_T |grad q|^2 + |q|^2,
/// |||q|||_{1,h}^2 = sum_T |Def q|^2 + (rho / h) ||[q]||^2_Sigma.
struct KornNorms
{
  double h1 = 0.0;
  double energy = 0.0;
  double l2 = 0.0;
  [[nodiscard]] double ratio() const { return h1 / (energy + l2); }
};
[[nodiscard]] KornNorms korn_norms(FeSystem const & system, Coefficients const & q);

} // namespace surfstokes
