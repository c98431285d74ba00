#include "surfstokes/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace surfstokes
{

namespace
{

constexpr int max_newton_iterations = 50;

// Orthonormal pair spanning the plane orthogonal to n.
std::pair<Vec3, Vec3> tangent_frame(Vec3 const & n)
{
  Vec3 const a = std::abs(n[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 t1 = (a - a.dot(n) * n).normalized();
  Vec3 t2 = n.cross(t1);
  return {t1, t2};
}

} // namespace

Ellipsoid::Ellipsoid(double c) : c_(c), inv_c2_(1.0 / (c * c))
{
  if (!(c > 0.0))
    throw Error("Ellipsoid: c must be positive");
}

GeometryEval Ellipsoid::closest_point(Vec3 const & x) const
{
  GeometryEval ev;

  // Stationarity of |x - y|^2 + t phi(y) gives y = (I + t D)^{-1} x with
  // D = diag(1, 1, 1/c^2); t solves F(t) = phi(y(t)) = 0.
  double const rxy2 = x[0] * x[0] + x[1] * x[1];
  double const z2 = x[2] * x[2];
  double const lower = -std::min(1.0, c_ * c_);

  auto F = [&](double t) {
    double const a = 1.0 + t;
    double const b = 1.0 + t * inv_c2_;
    return rxy2 / (a * a) + z2 * inv_c2_ / (b * b) - 1.0;
  };
  auto dF = [&](double t) {
    double const a = 1.0 + t;
    double const b = 1.0 + t * inv_c2_;
    return -2.0 * rxy2 / (a * a * a) - 2.0 * z2 * inv_c2_ * inv_c2_ / (b * b * b);
  };

  double const phi = level_set(x);
  if (!(phi > -1.0))
    throw ProjectionError("closest_point: query at the ellipsoid centre");
  // seed from radial scaling, exact on the sphere
  double t = std::sqrt(phi + 1.0) - 1.0;
  bool converged = false;
  for (int it = 0; it < max_newton_iterations; ++it) {
    double const f = F(t);
    double const df = dF(t);
    if (!std::isfinite(f) || df == 0.0)
      break;
    double tn = t - f / df;
    if (tn <= lower)
      tn = 0.5 * (t + lower);
    double const step = std::abs(tn - t);
    t = tn;
    if (step <= 1e-15 * (1.0 + std::abs(t))) {
      converged = true;
      break;
    }
  }
  if (!converged || std::abs(F(t)) > 1e-12) {
    std::ostringstream msg;
    msg << "closest_point: projection did not converge for x = (" << x.transpose()
        << "); point outside the admissible neighbourhood";
    throw ProjectionError(msg.str());
  }

  Vec3 const y{x[0] / (1.0 + t), x[1] / (1.0 + t), x[2] / (1.0 + t * inv_c2_)};
  Vec3 const grad{2.0 * y[0], 2.0 * y[1], 2.0 * y[2] * inv_c2_};
  double const grad_norm = grad.norm();

  ev.point_on_gamma = y;
  ev.nu = grad / grad_norm;
  double const dist = (x - y).norm();
  ev.d = phi < 0.0 ? -dist : dist;
  ev.Pi = Mat3::Identity() - ev.nu * ev.nu.transpose();

  // shape operator at P(x) from the level-set Hessian 2 D
  Mat3 const hess_phi = Eigen::Vector3d(2.0, 2.0, 2.0 * inv_c2_).asDiagonal();
  Mat3 const shape = ev.Pi * hess_phi * ev.Pi / grad_norm;

  auto const [t1, t2] = tangent_frame(ev.nu);
  Mat2 s;
  s << t1.dot(shape * t1), t1.dot(shape * t2), t2.dot(shape * t1), t2.dot(shape * t2);
  Eigen::SelfAdjointEigenSolver<Mat2> eig(s);
  ev.kappa = {eig.eigenvalues()[0], eig.eigenvalues()[1]};

  // Hess d(x) = S (I + d S)^{-1} with S the shape operator at P(x)
  ev.H = shape * (Mat3::Identity() + ev.d * shape).inverse();
  ev.H = 0.5 * (ev.H + ev.H.transpose());
  return ev;
}

double area_ratio(GeometryEval const & eval, Vec3 const & nu_face)
{
  double const cos_angle = eval.nu.dot(nu_face);
  if (!(cos_angle > 0.0))
    throw TransversalityError("area_ratio: nu . nu_Gamma <= 0");
  // 1 - d kappa_i(x) = 1 / (1 + d kappa_i(P(x)))
  return cos_angle / ((1.0 + eval.d * eval.kappa[0]) * (1.0 + eval.d * eval.kappa[1]));
}

Vec3 piola_lift(GeometryEval const & eval, Vec3 const & nu_face, Vec3 const & q_bar)
{
  double const mu = area_ratio(eval, nu_face);
  return (eval.Pi - eval.d * eval.H) * q_bar / mu;
}

Vec3 piola_pullback(GeometryEval const & eval, Vec3 const & nu_face, Vec3 const & q)
{
  double const mu = area_ratio(eval, nu_face);
  Mat3 const oblique =
    Mat3::Identity() - eval.nu * nu_face.transpose() / eval.nu.dot(nu_face);
  Vec3 const w = (Mat3::Identity() - eval.d * eval.H).partialPivLu().solve(q);
  return mu * oblique * w;
}

} // namespace surfstokes
