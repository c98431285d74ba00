#include "surfstokes/killing.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace surfstokes;

namespace
{

struct Fixture
{
  FeSystem sys;
  EigenSet eigs;
};

Fixture const & ellipsoid_level2()
{
  static Fixture const fx = [] {
    Ellipsoid const s(1.1);
    Fixture f{assemble(icosphere(s, 2, 0.1), s, 10.0), {}};
    f.eigs = solve_eigen(f.sys, 4);
    return f;
  }();
  return fx;
}

VectorXd random_vector(int n, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = u(rng);
  return v;
}

} // namespace

TEST(FilterPolicy, Parse)
{
  EXPECT_EQ(FilterPolicy::parse("none").mode, FilterMode::none);
  EXPECT_EQ(FilterPolicy::parse("manual").mode, FilterMode::manual);
  EXPECT_EQ(FilterPolicy::parse("forcing").mode, FilterMode::forcing);
  auto const k = FilterPolicy::parse("known:2");
  EXPECT_EQ(k.mode, FilterMode::known_dim);
  EXPECT_EQ(k.dim, 2);
  auto const a = FilterPolicy::parse("auto:1.5");
  EXPECT_EQ(a.mode, FilterMode::threshold);
  EXPECT_EQ(a.alpha, 1.5);
  EXPECT_EQ(a.str(), "auto:1.5");
  EXPECT_EQ(k.str(), "known:2");
  for (auto const * bad : {"known:4", "known:-1", "known:x", "auto:2", "auto:0.5", "auto:", "threshold", ""})
    EXPECT_THROW((void)FilterPolicy::parse(bad), Error) << bad;
}

TEST(Threshold, PlugInExamples)
{
  std::vector<double> const lam{1e-6, 0.0096, 0.0096};
  EXPECT_EQ(threshold_select(lam, 0.1, 1.0), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(threshold_select(lam, 0.02, 1.0), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(threshold_select(lam, 0.005, 1.0), (std::vector<int>{1}));
  EXPECT_EQ(threshold_select(lam, 0.05, 1.5), (std::vector<int>{1}));
  EXPECT_NEAR(std::pow(0.05, 1.5) - 2 * 0.05 * 0.05, 0.00618, 1e-5);
  // only three candidates
  EXPECT_EQ(threshold_select({0.0, 0.0, 0.0, 0.0}, 0.1, 1.0).size(), 3u);
}

TEST(ForcingCriterion, PlugInExamples)
{
  auto const zero = forcing_criterion(0.0, 0.1);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_NEAR(zero.rhs, 1.0 / 0.01, 1e-10);
  EXPECT_TRUE(zero.selected);

  auto const coarse = forcing_criterion(0.40, 0.1);
  EXPECT_NEAR(coarse.lhs, 1.056, 2e-3);
  EXPECT_NEAR(coarse.rhs, 1.383, 2e-3);
  EXPECT_TRUE(coarse.selected);

  auto const fine = forcing_criterion(0.40, 0.02);
  EXPECT_GT(fine.lhs, fine.rhs);
  EXPECT_FALSE(fine.selected);
}

TEST(FilterVelocity, NoneAndKnownZeroLeaveInputUnchanged)
{
  auto const & fx = ellipsoid_level2();
  VectorXd const U = random_vector(fx.sys.n_velocity(), 1);
  for (auto const * p : {"none", "known:0"}) {
    auto const r = filter_velocity(fx.sys, nullptr, U, FilterPolicy::parse(p), fx.sys.h);
    EXPECT_EQ(r.filtered, U);
    EXPECT_TRUE(r.selected.empty());
  }
}

TEST(FilterVelocity, PoliciesNeedEigenpairs)
{
  auto const & fx = ellipsoid_level2();
  VectorXd const U = random_vector(fx.sys.n_velocity(), 1);
  for (auto const * p : {"known:1", "auto:1", "forcing"})
    EXPECT_THROW((void)filter_velocity(fx.sys, nullptr, U, FilterPolicy::parse(p), 0.1), Error) << p;
}

TEST(FilterVelocity, SelectedModesRemovedOthersKept)
{
  auto const & fx = ellipsoid_level2();
  double const eps = fx.sys.h * fx.sys.h;
  VectorXd const U = solve_stokes(fx.sys, eps).U;
  for (auto const * p : {"known:1", "known:3", "auto:1", "auto:1.5"}) {
    auto const r = filter_velocity(fx.sys, &fx.eigs, U, FilterPolicy::parse(p), fx.sys.h);
    for (int i = 0; i < 4; ++i) {
      double const before = U.dot(fx.sys.Mv * fx.eigs.vectors[i]);
      double const after = r.filtered.dot(fx.sys.Mv * fx.eigs.vectors[i]);
      bool const in = std::find(r.selected.begin(), r.selected.end(), i + 1) != r.selected.end();
      if (in)
        EXPECT_NEAR(after, 0.0, 1e-10) << p << " mode " << i + 1;
      else
        EXPECT_NEAR(after, before, 1e-10) << p << " mode " << i + 1;
    }
  }
}

TEST(FilterVelocity, ThresholdReportIsConsistent)
{
  auto const & fx = ellipsoid_level2();
  VectorXd const U = random_vector(fx.sys.n_velocity(), 5);
  double const h = fx.sys.h;
  auto const r = filter_velocity(fx.sys, &fx.eigs, U, FilterPolicy::parse("auto:1"), h);
  EXPECT_NEAR(r.threshold, h - 2 * h * h, 1e-15);
  ASSERT_EQ(r.margins.size(), 3u);
  std::vector<int> J;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.margins[i], r.threshold - fx.eigs.values[i], 1e-15);
    if (r.margins[i] >= 0.0)
      J.push_back(i + 1);
  }
  EXPECT_EQ(r.selected, J);
}

TEST(FilterVelocity, ManualRemovesAnalyticFields)
{
  auto const & fx = ellipsoid_level2();
  VectorXd const U = random_vector(fx.sys.n_velocity(), 6);
  auto const r = filter_velocity(fx.sys, nullptr, U, FilterPolicy::parse("manual"), fx.sys.h);
  EXPECT_EQ(r.selected, (std::vector<int>{1}));
  VectorXd const K = fx.sys.k_interp.col(0);
  EXPECT_NEAR(r.filtered.dot(fx.sys.Mv * K), 0.0, 1e-12);
}

TEST(ForcingPipeline, WMatchesEigenexpansion)
{
  auto const & fx = ellipsoid_level2();
  FeSystem sys = fx.sys;
  sys.g_vec.setZero(); // the expansion holds for divergence-free data
  VectorXd const load = sys.f_vec + 0.5 * (sys.Mv * sys.k_interp.col(0));
  double const h = sys.h;
  auto const out = forcing_filter_pipeline(sys, fx.eigs, h, &load);
  EXPECT_NEAR(out.epsilon, std::pow(h, 2.0 / 3.0), 1e-15);
  for (int i = 0; i < fx.eigs.size(); ++i) {
    VectorXd const & Ui = fx.eigs.vectors[i];
    double const lam = fx.eigs.values[i];
    double const expected = lam / std::pow(lam + out.epsilon, 2) * load.dot(Ui);
    double const got = out.W.dot(sys.Mv * Ui);
    EXPECT_NEAR(got, expected, 1e-6 * std::abs(expected)) << "mode " << i + 1;
    EXPECT_NEAR(out.W_expansion.dot(sys.Mv * Ui), expected, 1e-10 * std::abs(expected) + 1e-14);
    // eps U_f carries (f, U_i) eps / (Lambda_i + eps)
    double const uf = out.epsilon * out.U_f.dot(sys.Mv * Ui);
    EXPECT_NEAR(uf, out.epsilon / (lam + out.epsilon) * load.dot(Ui), 1e-8 * std::abs(load.dot(Ui)));
  }
  EXPECT_EQ(out.report.policy.mode, FilterMode::forcing);
  ASSERT_EQ(out.report.lhs.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    auto const c = forcing_criterion(fx.eigs.values[i], h);
    EXPECT_EQ(c.lhs, out.report.lhs[i]);
    EXPECT_EQ(c.rhs, out.report.rhs[i]);
  }
}
