#pragma once

#include "surfstokes/types.hpp"

#include <array>

namespace surfstokes
{

/// Pointwise geometric data of the surface at the closest point of a query.
struct GeometryEval
{
  Vec3 point_on_gamma;         ///< P(x)
  double d = 0.0;              ///< signed distance, negative inside
  Vec3 nu;                     ///< unit normal, constant along normals
  Mat3 Pi;                     ///< tangential projector I - nu nu^T
  Mat3 H;                      ///< Hess d at the query point
  std::array<double, 2> kappa; ///< principal curvatures at P(x), ascending
};

/// Ellipsoid x^2 + y^2 + z^2/c^2 = 1 (c = 1 is the unit sphere).
class Ellipsoid
{
public:
  explicit Ellipsoid(double c);

  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] bool is_sphere() const { return c_ == 1.0; }

  /// phi(x) = x^2 + y^2 + z^2/c^2 - 1
  template <typename T>
  [[nodiscard]] T level_set(std::array<T, 3> const & x) const
  {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] * inv_c2_ - 1.0;
  }

  /// Outward unit normal of the level-set extension, grad phi / |grad phi|.
  template <typename T>
  [[nodiscard]] std::array<T, 3> level_set_normal(std::array<T, 3> const & x) const
  {
    using std::sqrt;
    std::array<T, 3> n{x[0], x[1], x[2] * inv_c2_};
    T const len = sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (auto & ni : n)
      ni = ni / len;
    return n;
  }

  [[nodiscard]] double level_set(Vec3 const & x) const
  {
    return level_set(std::array<double, 3>{x[0], x[1], x[2]});
  }

  /// Closest point projection and the geometric quantities attached to it.
  /// Throws ProjectionError when the multiplier iteration fails to converge.
  [[nodiscard]] GeometryEval closest_point(Vec3 const & x) const;

  /// Point of the ellipsoid obtained by stretching a unit-sphere point along z.
  [[nodiscard]] Vec3 from_sphere(Vec3 const & s) const { return {s[0], s[1], c_ * s[2]}; }

private:
  double c_;
  double inv_c2_;
};

/// Area element ratio mu = (nu . nu_Gamma) prod_i (1 - d kappa_i(x)), where
/// kappa_i(x) are the nonzero eigenvalues of H at the query point.
[[nodiscard]] double area_ratio(GeometryEval const & eval, Vec3 const & nu_face);

/// Surface Piola transform Gamma -> gamma: q = mu^{-1} (Pi - d H) q_bar.
[[nodiscard]] Vec3 piola_lift(GeometryEval const & eval, Vec3 const & nu_face, Vec3 const & q_bar);

/// Inverse Piola transform gamma -> Gamma:
/// q_bar = mu [I - nu nu_Gamma^T / (nu . nu_Gamma)] (I - d H)^{-1} q.
[[nodiscard]] Vec3
piola_pullback(GeometryEval const & eval, Vec3 const & nu_face, Vec3 const & q);

} // namespace surfstokes
