#include "surfstokes/quadrature.hpp"

#include <array>
#include <cmath>

namespace surfstokes
{

TriangleRule const & triangle_rule_degree4()
{
  static TriangleRule const rule = [] {
    TriangleRule r;
    double const a = 0.445948490915964886318329253883;
    double const b = 1.0 - 2.0 * a;
    double const wa = 0.223381589678011465944827882572;
    double const c = 0.091576213509770743459571463402;
    double const d = 1.0 - 2.0 * c;
    double const wc = 0.109951743655321867388505450761;
    r.points = {{b, a, a}, {a, b, a}, {a, a, b}, {d, c, c}, {c, d, c}, {c, c, d}};
    r.weights = {wa, wa, wa, wc, wc, wc};
    return r;
  }();
  return rule;
}

TriangleRule composite_triangle_rule(int levels)
{
  // subtriangles as barycentric vertex triples
  std::vector<std::array<Eigen::Vector3d, 3>> tris{
    {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)}};
  for (int l = 0; l < levels; ++l) {
    std::vector<std::array<Eigen::Vector3d, 3>> next;
    next.reserve(4 * tris.size());
    for (auto const & t : tris) {
      Eigen::Vector3d const m01 = 0.5 * (t[0] + t[1]);
      Eigen::Vector3d const m12 = 0.5 * (t[1] + t[2]);
      Eigen::Vector3d const m20 = 0.5 * (t[2] + t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({m01, t[1], m12});
      next.push_back({m20, m12, t[2]});
      next.push_back({m12, m20, m01});
    }
    tris = std::move(next);
  }
  auto const & base = triangle_rule_degree4();
  TriangleRule r;
  double const scale = 1.0 / static_cast<double>(tris.size());
  for (auto const & t : tris)
    for (std::size_t q = 0; q < base.points.size(); ++q) {
      auto const & l = base.points[q];
      r.points.push_back(l[0] * t[0] + l[1] * t[1] + l[2] * t[2]);
      r.weights.push_back(base.weights[q] * scale);
    }
  return r;
}

LineRule const & gauss_rule(int n)
{
  static std::array<LineRule, 6> const rules = [] {
    std::array<LineRule, 6> out;
    for (int m = 1; m <= 6; ++m) {
      // Golub-Welsch on the Legendre Jacobi matrix
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int k = 1; k < m; ++k) {
        double const beta = k / std::sqrt(4.0 * k * k - 1.0);
        T(k, k - 1) = beta;
        T(k - 1, k) = beta;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
      LineRule r;
      for (int k = 0; k < m; ++k) {
        r.points.push_back(0.5 * (eig.eigenvalues()[k] + 1.0));
        double const v0 = eig.eigenvectors()(0, k);
        r.weights.push_back(v0 * v0);
      }
      out[m - 1] = r;
    }
    return out;
  }();
  if (n < 1 || n > 6)
    throw Error("gauss_rule: supported orders are 1..6");
  return rules[n - 1];
}

} // namespace surfstokes
