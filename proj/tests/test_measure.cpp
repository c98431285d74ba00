#include "surfstokes/measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace surfstokes;

namespace
{

Coefficients interpolate_exact(FeSystem const & sys, Ellipsoid const & s, GammaField const & u)
{
  return interpolate_bdm(sys.mesh, sys.dofs, [&](int f, Vec3 const & x) {
    auto const ev = s.closest_point(x);
    return piola_pullback(ev, sys.mesh.face_normal(f), u(ev.point_on_gamma));
  });
}

} // namespace

TEST(GammaQuadrature, SurfaceAreas)
{
  EXPECT_NEAR(GammaQuadrature(Ellipsoid(1.0)).integrate([](Vec3 const &) { return 1.0; }), 4 * M_PI, 1e-8);
  double const c = 2.0, e = std::sqrt(1.0 - 1.0 / (c * c));
  double const prolate = 2 * M_PI * (1.0 + c * std::asin(e) / e);
  EXPECT_NEAR(GammaQuadrature(Ellipsoid(c)).integrate([](Vec3 const &) { return 1.0; }), prolate, 1e-7);
}

TEST(GammaQuadrature, PolynomialMoments)
{
  GammaQuadrature const q(Ellipsoid(1.0));
  EXPECT_NEAR(q.integrate([](Vec3 const & y) { return y[0] * y[0]; }), 4 * M_PI / 3, 1e-8);
  EXPECT_NEAR(q.integrate([](Vec3 const & y) { return y[2]; }), 0.0, 1e-12);
  for (auto const & p : q.points())
    EXPECT_NEAR(p.norm(), 1.0, 1e-12);
}

TEST(AnalyticKilling, ProjectionIsIdentityOnKillingFields)
{
  Ellipsoid const s(1.0);
  GammaQuadrature const q(s);
  AnalyticKilling const k(s, q);
  ASSERT_EQ(k.dim(), 3);
  auto const k2 = [&](Vec3 const & y) { return k.basis().value(1, y); };
  VectorXd const c = k.coefficients(k2);
  EXPECT_NEAR((c - Vec3(0, 1, 0)).norm(), 0.0, 1e-10);
  Vec3 const y = Vec3(0.3, -0.2, 0.9).normalized();
  EXPECT_NEAR(k.remainder(k2)(y).norm(), 0.0, 1e-10);
  // idempotent on the manufactured velocity
  auto const ex = exact_fields(s);
  auto const pu = k.projection([&](Vec3 const & x) { return ex.velocity(x); });
  EXPECT_NEAR((k.projection(pu)(y) - pu(y)).norm(), 0.0, 1e-10);
  VectorXd const rem = k.coefficients(k.remainder([&](Vec3 const & x) { return ex.velocity(x); }));
  EXPECT_LE(rem.norm(), 1e-10);
}

TEST(MeasureErrors, ZeroAgainstZero)
{
  Ellipsoid const s(1.25);
  auto const sys = assemble(icosphere(s, 2, 0.1), s, 10.0);
  auto const e = measure_errors(sys, s, Coefficients::Zero(sys.n_velocity()), [](Vec3 const &) { return Vec3::Zero(); });
  EXPECT_EQ(e.l2, 0.0);
  EXPECT_EQ(e.energy, 0.0);
  EXPECT_EQ(e.h1, 0.0);
}

TEST(MeasureErrors, NormsOfDiscreteFunction)
{
  Ellipsoid const s(1.25);
  auto const sys = assemble(icosphere(s, 2, 0.1), s, 10.0);
  Coefficients U = sys.k_interp.col(0);
  auto const e = measure_errors(sys, s, U, [](Vec3 const &) { return Vec3::Zero(); });
  EXPECT_NEAR(e.l2, l2_norm(sys, U), 1e-12 * e.l2);
  EXPECT_NEAR(e.l2, std::sqrt(U.dot(sys.Mv * U)), 1e-12 * e.l2);
  // Def part of the broken energy: 2 |Def|^2 = U^T A U
  EXPECT_NEAR(e.energy * e.energy, 0.5 * U.dot(sys.A * U), 1e-10);
}

TEST(MeasureErrors, InterpolantRates)
{
  Ellipsoid const s(1.25);
  auto const ex = exact_fields(s);
  GammaField const u = [&](Vec3 const & y) { return ex.velocity(y); };
  std::vector<ErrorNorms> e;
  std::vector<double> h;
  for (int L = 2; L <= 4; ++L) {
    auto const sys = assemble(icosphere(s, L, 0.1), s, 10.0);
    e.push_back(measure_errors(sys, s, interpolate_exact(sys, s, u), u));
    h.push_back(sys.h);
  }
  for (int k = 1; k < 3; ++k) {
    double const r = std::log(h[k - 1] / h[k]);
    EXPECT_NEAR(std::log(e[k - 1].l2 / e[k].l2) / r, 2.0, 0.3);
    EXPECT_NEAR(std::log(e[k - 1].h1 / e[k].h1) / r, 1.0, 0.2);
    EXPECT_NEAR(std::log(e[k - 1].energy / e[k].energy) / r, 1.0, 0.2);
  }
}

TEST(PkNorm, KillingInterpolantAndScaling)
{
  Ellipsoid const s(1.0);
  auto const sys = assemble(icosphere(s, 3, 0.1), s, 10.0);
  for (int k = 0; k < 3; ++k) {
    Coefficients const K = sys.k_interp.col(k);
    EXPECT_NEAR(pk_norm(sys, K), std::sqrt(sys.gamma_gram(k, k)), 2e-2 * std::sqrt(sys.gamma_gram(k, k)));
  }
  EXPECT_EQ(pk_norm(sys, Coefficients::Zero(sys.n_velocity())), 0.0);
  Coefficients const U = sys.k_interp.col(0) + 0.3 * sys.k_interp.col(2);
  EXPECT_NEAR(pk_norm(sys, 2.0 * U), 2.0 * pk_norm(sys, U), 1e-13);
}

TEST(Korn, RatioBoundedAcrossLevels)
{
  Ellipsoid const s(1.25);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double prev = 0.0;
  for (int L = 1; L <= 4; ++L) {
    auto const sys = assemble(icosphere(s, L, 0.1), s, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      Coefficients q(sys.n_velocity());
      for (int i = 0; i < q.size(); ++i)
        q[i] = u(rng);
      auto const n = korn_norms(sys, q);
      EXPECT_GT(n.energy, 0.0);
      worst = std::max(worst, n.ratio());
    }
    if (L > 1)
      EXPECT_LE(worst, 1.2 * prev) << "level " << L;
    prev = worst;
  }
}
