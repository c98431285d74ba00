#include "surfstokes/measure.hpp"

#include "surfstokes/parallel.hpp"
#include "surfstokes/quadrature.hpp"

#include <cmath>
#include <exception>

namespace surfstokes
{

GammaQuadrature::GammaQuadrature(Ellipsoid const & surface, int level, int sublevels)
{
  auto const mesh = icosphere(surface, level);
  auto const rule = composite_triangle_rule(sublevels);
  points_.reserve(mesh.faces.size() * rule.points.size());
  weights_.reserve(points_.capacity());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    double const area = mesh.face_area(f);
    Vec3 const n = mesh.face_normal(f);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto const ev = surface.closest_point(mesh.point(f, rule.points[q]));
      points_.push_back(ev.point_on_gamma);
      // d gamma = mu d Gamma
      weights_.push_back(rule.weights[q] * area * area_ratio(ev, n));
    }
  }
}

double GammaQuadrature::integrate(std::function<double(Vec3 const &)> const & fn) const
{
  double s = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i)
    s += weights_[i] * fn(points_[i]);
  return s;
}

AnalyticKilling::AnalyticKilling(Ellipsoid const & surface, GammaQuadrature const & quad)
  : basis_(killing_basis(surface)), quad_(quad)
{
  int const n = basis_.dim();
  gram_ = MatrixXd::Zero(n, n);
  auto const & pts = quad_.points();
  auto const & w = quad_.weights();
  for (std::size_t q = 0; q < pts.size(); ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        gram_(i, j) += w[q] * basis_.value(i, pts[q]).dot(basis_.value(j, pts[q]));
}

VectorXd AnalyticKilling::coefficients(GammaField const & v) const
{
  int const n = basis_.dim();
  VectorXd b = VectorXd::Zero(n);
  auto const & pts = quad_.points();
  auto const & w = quad_.weights();
  for (std::size_t q = 0; q < pts.size(); ++q) {
    Vec3 const vq = v(pts[q]);
    for (int i = 0; i < n; ++i)
      b[i] += w[q] * vq.dot(basis_.value(i, pts[q]));
  }
  return gram_.ldlt().solve(b);
}

GammaField AnalyticKilling::projection(GammaField const & v) const
{
  VectorXd const c = coefficients(v);
  KillingBasis const basis = basis_;
  return [c, basis](Vec3 const & y) {
    Vec3 s = Vec3::Zero();
    for (int j = 0; j < basis.dim(); ++j)
      s += c[j] * basis.value(j, y);
    return s;
  };
}

GammaField AnalyticKilling::remainder(GammaField const & v) const
{
  auto const p = projection(v);
  return [v, p](Vec3 const & y) { return Vec3(v(y) - p(y)); };
}

ErrorNorms measure_errors(FeSystem const & system,
                          Ellipsoid const & surface,
                          Coefficients const & U,
                          GammaField const & exact)
{
  auto const & mesh = system.mesh;
  auto const & dofs = system.dofs;
  auto const & rule = triangle_rule_degree4();
  int const nf = mesh.num_faces();
  int const workers = thread_count();
  // per-face sums, reduced in face order so the result is thread-count independent
  std::vector<std::array<double, 3>> part(nf, {0.0, 0.0, 0.0});
  std::vector<std::exception_ptr> failures(std::max(1, workers));

  parallel_for(nf, workers, [&](int begin, int end, int w) {
    try {
      for (int f = begin; f < end; ++f) {
        FaceMap const map = FaceMap::of(mesh, f);
        Vec3 const t1 = map.DA.col(0).normalized();
        Vec3 const t2 = map.normal.cross(t1);
        double const step = 1e-3 * std::sqrt(map.area);
        auto ubar = [&](Vec3 const & x) {
          auto const ev = surface.closest_point(x);
          return piola_pullback(ev, map.normal, exact(ev.point_on_gamma));
        };
        auto const basis = eval_velocity_basis(map, Eigen::Vector3d::Constant(1.0 / 3.0));
        Mat3 GU = Mat3::Zero();
        for (int j = 0; j < 6; ++j)
          GU += dofs.face_signs[f][j] * U[dofs.face_dofs[f][j]] * basis[j].gradient;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          double const wq = rule.weights[q] * map.area;
          Vec3 const x = mesh.point(f, rule.points[q]);
          Vec3 const e = ubar(x) - eval_velocity(mesh, dofs, U, f, rule.points[q]);
          Mat3 G = Mat3::Zero();
          for (Vec3 const & t : {t1, t2}) {
            Vec3 const d = (-ubar(x + 2.0 * step * t) + 8.0 * ubar(x + step * t) - 8.0 * ubar(x - step * t) +
                            ubar(x - 2.0 * step * t)) /
                           (12.0 * step);
            G += d * t.transpose();
          }
          Mat3 const GE = G - GU;
          Mat3 const DE = 0.5 * (GE + GE.transpose());
          part[f][0] += wq * e.squaredNorm();
          part[f][1] += wq * DE.squaredNorm();
          part[f][2] += wq * GE.squaredNorm();
        }
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  });
  for (auto const & err : failures)
    if (err)
      std::rethrow_exception(err);
  ErrorNorms out;
  for (auto const & p : part) {
    out.l2 += p[0];
    out.energy += p[1];
    out.h1 += p[2];
  }
  out.l2 = std::sqrt(out.l2);
  out.energy = std::sqrt(out.energy);
  out.h1 = std::sqrt(out.h1);
  return out;
}

double l2_norm(FeSystem const & system, Coefficients const & U)
{
  return std::sqrt(std::max(0.0, U.dot(system.Mv * U)));
}

double pk_norm(FeSystem const & system, Coefficients const & U)
{
  if (system.dim_killing == 0)
    return 0.0;
  VectorXd const b = system.k_gram * U;
  VectorXd const c = system.gamma_gram.ldlt().solve(b);
  return std::sqrt(std::max(0.0, c.dot(system.gamma_gram * c)));
}

KornNorms korn_norms(FeSystem const & system, Coefficients const & q)
{
  KornNorms k;
  double grad2 = 0.0;
  for (int f = 0; f < system.mesh.num_faces(); ++f) {
    Mat3 const G = velocity_gradient(system.mesh, system.dofs, q, f);
    grad2 += system.face_area[f] * G.squaredNorm();
  }
  double const l2sq = q.dot(system.Mv * q);
  double const def2 = 0.5 * q.dot(system.A * q);
  double const jump2 = 0.5 * q.dot(system.JM * q);
  k.l2 = std::sqrt(std::max(0.0, l2sq));
  k.h1 = std::sqrt(std::max(0.0, grad2 + l2sq));
  k.energy = std::sqrt(std::max(0.0, def2 + system.rho / system.h * jump2));
  return k;
}

} // namespace surfstokes
