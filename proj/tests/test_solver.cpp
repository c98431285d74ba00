#include "surfstokes/solver.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace surfstokes;

namespace
{

VectorXd random_vector(int n, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = u(rng);
  return v;
}

FeSystem const & system_c(double c)
{
  static std::map<double, FeSystem> cache;
  auto it = cache.find(c);
  if (it == cache.end()) {
    Ellipsoid const s(c);
    it = cache.emplace(c, assemble(icosphere(s, 2, 0.1), s, 10.0)).first;
  }
  return it->second;
}

double mean_of(FeSystem const & sys, VectorXd const & P) { return sys.face_area.dot(P) / sys.face_area.sum(); }

} // namespace

TEST(Saddle, ZeroDataGivesZero)
{
  auto const & sys = system_c(1.0);
  SaddlePointSolver const solver(sys, 0.5);
  auto const r = solver.solve(VectorXd::Zero(sys.n_velocity()), VectorXd::Zero(sys.n_pressure()));
  EXPECT_EQ(r.U.norm(), 0.0);
  EXPECT_EQ(r.P.norm(), 0.0);
}

TEST(Saddle, ConstructThenSolve)
{
  for (double c : {1.0, 2.0}) {
    auto const & sys = system_c(c);
    for (double eps : {1e-3, 1.0}) {
      VectorXd const Ustar = random_vector(sys.n_velocity(), 1);
      VectorXd Pstar = random_vector(sys.n_pressure(), 2);
      Pstar.array() -= mean_of(sys, Pstar);
      VectorXd const g = sys.B * Ustar;
      VectorXd const f = EpsilonOperator(sys, eps).apply(Ustar) - sys.B.transpose() * Pstar;
      SaddlePointSolver const solver(sys, eps);
      auto const r = solver.solve(f, g);
      EXPECT_LE((r.U - Ustar).norm(), 1e-9 * Ustar.norm()) << "c=" << c << " eps=" << eps;
      EXPECT_LE((r.P - Pstar).norm(), 1e-9 * Pstar.norm()) << "c=" << c << " eps=" << eps;
      EXPECT_NEAR(r.multiplier, 0.0, 1e-9);
      EXPECT_LE(r.residual, 1e-12);
    }
  }
}

TEST(Saddle, ManufacturedSolveSatisfiesConstraint)
{
  auto const & sys = system_c(1.25);
  auto const sol = solve_stokes(sys, sys.h * sys.h);
  EXPECT_FALSE(sol.ill_conditioned);
  EXPECT_NEAR(mean_of(sys, sol.P), 0.0, 1e-10);
  // B U = g up to the mean-value correction carried by the multiplier
  VectorXd const g_consistent = sys.g_vec - (sys.g_vec.sum() / sys.face_area.sum()) * sys.face_area;
  EXPECT_LE((sys.B * sol.U - g_consistent).norm(), 1e-9 * sys.g_vec.norm());
}

TEST(Saddle, EpsilonZeroIsSingular)
{
  for (double c : {1.0, 1.25})
    EXPECT_THROW(SaddlePointSolver(system_c(c), 0.0), SingularSystemError);
  EXPECT_THROW(SaddlePointSolver(system_c(1.0), -1.0), Error);
}

TEST(Eigen, PencilProperties)
{
  auto const & sys = system_c(1.25);
  auto const eigs = solve_eigen(sys, 5);
  ASSERT_EQ(eigs.size(), 5);
  int const np = sys.n_pressure();
  // Euclidean projection onto ker B^T-complement: r - B^T p, (B B^T + a a^T) p = B r
  MatrixXd const Bd = MatrixXd(sys.B);
  MatrixXd const S = Bd * Bd.transpose() + sys.face_area * sys.face_area.transpose();
  Eigen::LDLT<MatrixXd> const ldlt(S);
  SparseMatrix const AJ = sys.A + sys.J;
  for (int i = 0; i < eigs.size(); ++i) {
    VectorXd const & U = eigs.vectors[i];
    double const lam = eigs.values[i];
    if (i > 0)
      EXPECT_GE(lam, eigs.values[i - 1] - 1e-12);
    EXPECT_LE((sys.B * U).norm(), 1e-8);
    VectorXd const r = AJ * U - lam * (sys.Mv * U);
    VectorXd const p = ldlt.solve(Bd * r);
    EXPECT_EQ(p.size(), np);
    EXPECT_LE((r - Bd.transpose() * p).norm(), 1e-7 * (std::abs(lam) + 1.0)) << "mode " << i;
    for (int j = 0; j < eigs.size(); ++j)
      EXPECT_NEAR(U.dot(sys.Mv * eigs.vectors[j]), i == j ? 1.0 : 0.0, 1e-10);
  }
  // one Killing field on this ellipsoid: lambda_1 = O(h^2), lambda_2,3 a near pair
  EXPECT_LT(eigs.values[0], 0.5 * eigs.values[1]);
  EXPECT_NEAR(eigs.values[1], eigs.values[2], 0.01 * eigs.values[1]);
  EXPECT_GT(eigs.values[3], 10 * eigs.values[2]);
}

TEST(Eigen, ArgumentChecks)
{
  auto const & sys = system_c(1.0);
  EXPECT_THROW((void)solve_eigen(sys, 0), Error);
  EXPECT_THROW((void)solve_eigen(sys, 11), Error);
  SaddlePointSolver const wrong(sys, 0.5);
  EXPECT_THROW((void)solve_eigen(wrong, 3), Error);
}

TEST(Eigen, SphereKillingModesConvergeQuadratically)
{
  Ellipsoid const s(1.0);
  std::vector<std::vector<double>> lam;
  for (int L = 2; L <= 4; ++L)
    lam.push_back(solve_eigen(assemble(icosphere(s, L, 0.1), s, 10.0), 4).values);
  for (int i = 0; i < 3; ++i)
    for (int L = 1; L < 3; ++L) {
      double const ratio = lam[L - 1][i] / lam[L][i];
      EXPECT_GE(ratio, 3.0) << "mode " << i;
      EXPECT_LE(ratio, 5.0) << "mode " << i;
    }
  // the fourth mode is not a Killing field
  EXPECT_GT(lam[2][3], 100 * lam[2][2]);
}

TEST(Eigen, EigenexpansionOfSingleMode)
{
  auto const & sys = system_c(1.1);
  auto const eigs = solve_eigen(sys, 3);
  double const eps = sys.h * sys.h;
  SaddlePointSolver const solver(sys, eps);
  for (int m = 0; m < 3; ++m) {
    VectorXd const Um = eigs.vectors[m];
    VectorXd const U = solver.solve(sys.Mv * Um, VectorXd::Zero(sys.n_pressure())).U;
    VectorXd const expected = Um / (eigs.values[m] + eps);
    EXPECT_LE((U - expected).norm(), 1e-8 * expected.norm()) << "mode " << m;
  }
}

TEST(KillingProjection, AnalyticFields)
{
  auto const & sys = system_c(1.0);
  VectorXd U = random_vector(sys.n_velocity(), 8);
  auto const first = project_analytic_killing(sys, U);
  // the remainder is orthogonal to every field
  auto const zero = project_analytic_killing(sys, first.remainder);
  EXPECT_LE(zero.projection.norm(), 1e-12 * U.norm());
  // idempotent
  auto const again = project_analytic_killing(sys, first.projection);
  EXPECT_LE((again.projection - first.projection).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_LE((first.projection + first.remainder - U).norm(), 1e-13 * U.norm());
}

TEST(KillingProjection, InterpolatedRotationIsAlmostKilling)
{
  // the k_1 interpolant is nearly in the span of the discrete Killing modes
  Ellipsoid const s(1.0);
  double prev = 1e300;
  for (int L = 2; L <= 4; ++L) {
    auto const sys = assemble(icosphere(s, L, 0.1), s, 10.0);
    auto const eigs = solve_eigen(sys, 3);
    VectorXd const K = sys.k_interp.col(0);
    VectorXd const rest = project_discrete_killing(sys, eigs, {1, 2, 3}, K);
    double const rel = std::sqrt(rest.dot(sys.Mv * rest) / K.dot(sys.Mv * K));
    if (L > 2)
      EXPECT_LT(rel, 0.35 * prev) << "level " << L;
    prev = rel;
  }
  EXPECT_LT(prev, 5e-3);
}

TEST(KillingProjection, DiscreteModes)
{
  auto const & sys = system_c(1.0);
  auto const eigs = solve_eigen(sys, 3);
  VectorXd const U = random_vector(sys.n_velocity(), 3);
  EXPECT_EQ(project_discrete_killing(sys, eigs, {}, U), U);
  EXPECT_LE(project_discrete_killing(sys, eigs, {1}, eigs.vectors[0]).norm(), 1e-10);
  VectorXd const F = project_discrete_killing(sys, eigs, {1, 3}, U);
  EXPECT_NEAR(F.dot(sys.Mv * eigs.vectors[0]), 0.0, 1e-10);
  EXPECT_NEAR(F.dot(sys.Mv * eigs.vectors[1]), U.dot(sys.Mv * eigs.vectors[1]), 1e-10);
  EXPECT_THROW((void)project_discrete_killing(sys, eigs, {4}, U), Error);
}
