#pragma once

#include "surfstokes/dual.hpp"
#include "surfstokes/geometry.hpp"

#include <array>
#include <vector>

namespace surfstokes
{

namespace ad
{

template <typename T>
using Array3 = std::array<T, 3>;

template <typename T>
using Array33 = std::array<std::array<T, 3>, 3>;

/// Ambient Jacobian J[i][k] = d field_i / d x_k of a vector field written
/// generically in its scalar type.
template <typename Field, typename T>
Array33<T> jacobian(Field const & field, Array3<T> const & x)
{
  Array3<Dual<T>> xd;
  for (int k = 0; k < 3; ++k)
    xd[k] = Dual<T>(x[k], k);
  auto const fd = field(xd);
  Array33<T> J;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      J[i][k] = fd[i].d[k];
  return J;
}

template <typename T>
Array33<T> projector(Array3<T> const & n)
{
  Array33<T> P;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      P[i][j] = (i == j ? T(1.0) : T(0.0)) - n[i] * n[j];
  return P;
}

/// Def_gamma v = sym(Pi grad v Pi), valid on gamma for any smooth extension of v.
template <typename Field, typename T>
Array33<T> deformation(Ellipsoid const & surface, Field const & field, Array3<T> const & x)
{
  auto const J = jacobian(field, x);
  auto const P = projector(surface.level_set_normal(x));
  Array33<T> G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T s(0.0);
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          s += P[i][k] * J[k][l] * P[l][j];
      G[i][j] = s;
    }
  Array33<T> D;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      D[i][j] = 0.5 * (G[i][j] + G[j][i]);
  return D;
}

inline Vec3 to_vec(Array3<double> const & a) { return {a[0], a[1], a[2]}; }
inline Array3<double> to_array(Vec3 const & v) { return {v[0], v[1], v[2]}; }
inline Mat3 to_mat(Array33<double> const & a)
{
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = a[i][j];
  return m;
}

/// Tangential gradient Pi grad v Pi at a point of gamma.
template <typename Field>
Mat3 surface_gradient(Ellipsoid const & surface, Field const & field, Vec3 const & y)
{
  auto const x = to_array(y);
  auto const J = to_mat(jacobian(field, x));
  Mat3 const P = to_mat(projector(surface.level_set_normal(x)));
  return P * J * P;
}

template <typename Field>
double surface_divergence(Ellipsoid const & surface, Field const & field, Vec3 const & y)
{
  return surface_gradient(surface, field, y).trace();
}

/// Row-wise surface divergence of Def_gamma v at a point of gamma.
template <typename Field>
Vec3 divergence_of_deformation(Ellipsoid const & surface, Field const & field, Vec3 const & y)
{
  Array3<Dual<double>> xd;
  for (int k = 0; k < 3; ++k)
    xd[k] = Dual<double>(y[k], k);
  auto const D = deformation(surface, field, xd);
  Mat3 const P = to_mat(projector(surface.level_set_normal(to_array(y))));
  Vec3 r = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        r[i] += D[i][j].d[k] * P(k, j);
  return r;
}

} // namespace ad

/// Manufactured velocity u = Pi (-z^2, x, y)^T, extended off gamma with the
/// level-set normal.
struct ManufacturedVelocity
{
  Ellipsoid surface;

  template <typename T>
  std::array<T, 3> operator()(std::array<T, 3> const & x) const
  {
    auto const n = surface.level_set_normal(x);
    std::array<T, 3> w{-(x[2] * x[2]), x[0], x[1]};
    T const wn = w[0] * n[0] + w[1] * n[1] + w[2] * n[2];
    for (int i = 0; i < 3; ++i)
      w[i] = w[i] - wn * n[i];
    return w;
  }
};

/// Rigid rotation fields (y,-x,0), (z,0,-x), (0,z,-y).
struct RotationField
{
  int axis = 0;

  template <typename T>
  std::array<T, 3> operator()(std::array<T, 3> const & x) const
  {
    T const zero(0.0);
    switch (axis) {
    case 0:
      return {x[1], -x[0], zero};
    case 1:
      return {x[2], zero, -x[0]};
    default:
      return {zero, x[2], -x[1]};
    }
  }
};

/// Manufactured solution with forcing f = -2 Pi div Def u + (grad_gamma p)^T
/// and divergence data g = div_gamma u.  All evaluators expect points on gamma.
class ExactSolution
{
public:
  explicit ExactSolution(Ellipsoid const & surface);

  [[nodiscard]] Vec3 velocity(Vec3 const & y) const;
  [[nodiscard]] Mat3 velocity_gradient(Vec3 const & y) const;
  /// x y^3 + z; the mean is fixed later against the discrete surface.
  [[nodiscard]] double pressure(Vec3 const & y) const;
  [[nodiscard]] Vec3 forcing(Vec3 const & y) const;
  [[nodiscard]] double divergence(Vec3 const & y) const;

  [[nodiscard]] Ellipsoid const & surface() const { return surface_; }

private:
  Ellipsoid surface_;
  ManufacturedVelocity u_;
};

struct KillingBasis
{
  Ellipsoid surface{1.0};
  std::vector<RotationField> fields;

  [[nodiscard]] int dim() const { return static_cast<int>(fields.size()); }
  [[nodiscard]] Vec3 value(int j, Vec3 const & y) const;
  [[nodiscard]] Mat3 deformation(int j, Vec3 const & y) const;
};

[[nodiscard]] ExactSolution exact_fields(Ellipsoid const & surface);

/// Three rotations on the sphere, the z-rotation otherwise.
[[nodiscard]] KillingBasis killing_basis(Ellipsoid const & surface);

} // namespace surfstokes
