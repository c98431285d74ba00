#pragma once

#include "surfstokes/assembly.hpp"

#include <memory>
#include <vector>

namespace surfstokes
{

/// Factorized saddle system
///   [ A + J + eps Mv   B^T   0 ] [ U  ]   [ f ]
///   [ B                0     a ] [ -P ] = [ g ]
///   [ 0                a^T   0 ] [ l  ]   [ 0 ]
/// with a the face areas (mean-zero pressure).  P is the physical pressure.
class SaddlePointSolver
{
public:
  SaddlePointSolver(FeSystem const & system, double epsilon);
  ~SaddlePointSolver();
  SaddlePointSolver(SaddlePointSolver const &) = delete;
  SaddlePointSolver & operator=(SaddlePointSolver const &) = delete;

  struct Result
  {
    Coefficients U;
    Coefficients P;
    double multiplier = 0.0;
    double residual = 0.0; ///< relative algebraic residual of the full system
  };

  [[nodiscard]] Result solve(VectorXd const & f, VectorXd const & g) const;
  /// Velocity part of the constrained solve with g = 0.
  [[nodiscard]] VectorXd solve_velocity(VectorXd const & f) const;

  [[nodiscard]] double epsilon() const { return eps_; }
  [[nodiscard]] FeSystem const & system() const { return sys_; }

private:
  struct Factorization;
  FeSystem const & sys_;
  double eps_;
  SparseMatrix M_;
  std::unique_ptr<Factorization> lu_;
};

struct StokesSolution
{
  Coefficients U;
  Coefficients P; ///< area-weighted mean zero
  double epsilon = 0.0;
  double residual_norm = 0.0;
  bool ill_conditioned = false; ///< residual above 1e-8
};

[[nodiscard]] StokesSolution solve_stokes(FeSystem const & system, double epsilon);
[[nodiscard]] StokesSolution solve_stokes(SaddlePointSolver const & solver,
                                          VectorXd const & f,
                                          VectorXd const & g);

/// Lowest eigenpairs of the constrained pencil, Lambda = Lambda~ - 1, U_i^T Mv U_j = delta_ij.
struct EigenSet
{
  std::vector<double> values;
  std::vector<Coefficients> vectors;
  std::vector<double> residuals;
  int iterations = 0;

  [[nodiscard]] int size() const { return static_cast<int>(values.size()); }
};

struct EigenOptions
{
  int block_extra = 6; ///< clears the five-fold second cluster on the sphere
  int max_iterations = 200;
  double tolerance = 1e-10; ///< on || theta S(Mv x) - x ||_Mv
  unsigned seed = 12345;
};

[[nodiscard]] EigenSet solve_eigen(FeSystem const & system, int k, EigenOptions const & options = {});
/// Reuse an existing factorization; its epsilon must be 1.
[[nodiscard]] EigenSet
solve_eigen(SaddlePointSolver const & stabilized, int k, EigenOptions const & options = {});

/// Mv-orthogonal projection onto span of the interpolated analytic Killing
/// fields; coefficients are with respect to k_interp columns.
struct KillingProjection
{
  Coefficients projection;
  Coefficients remainder;
  VectorXd coefficients;
};

[[nodiscard]] KillingProjection project_analytic_killing(FeSystem const & system, Coefficients const & U);

/// U - sum_{i in J} (U^T Mv U_i) U_i with 1-based indices J.
[[nodiscard]] Coefficients project_discrete_killing(FeSystem const & system,
                                                    EigenSet const & eigs,
                                                    std::vector<int> const & J,
                                                    Coefficients const & U);

} // namespace surfstokes
