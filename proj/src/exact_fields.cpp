#include "surfstokes/exact_fields.hpp"

namespace surfstokes
{

ExactSolution::ExactSolution(Ellipsoid const & surface) : surface_(surface), u_{surface} {}

Vec3 ExactSolution::velocity(Vec3 const & y) const { return ad::to_vec(u_(ad::to_array(y))); }

Mat3 ExactSolution::velocity_gradient(Vec3 const & y) const
{
  return ad::surface_gradient(surface_, u_, y);
}

double ExactSolution::pressure(Vec3 const & y) const
{
  return y[0] * y[1] * y[1] * y[1] + y[2];
}

Vec3 ExactSolution::forcing(Vec3 const & y) const
{
  Mat3 const Pi = ad::to_mat(ad::projector(surface_.level_set_normal(ad::to_array(y))));
  Vec3 const grad_p{y[1] * y[1] * y[1], 3.0 * y[0] * y[1] * y[1], 1.0};
  return -2.0 * Pi * ad::divergence_of_deformation(surface_, u_, y) + Pi * grad_p;
}

double ExactSolution::divergence(Vec3 const & y) const
{
  return ad::surface_divergence(surface_, u_, y);
}

Vec3 KillingBasis::value(int j, Vec3 const & y) const
{
  return ad::to_vec(fields.at(j)(ad::to_array(y)));
}

Mat3 KillingBasis::deformation(int j, Vec3 const & y) const
{
  return ad::to_mat(ad::deformation(surface, fields.at(j), ad::to_array(y)));
}

ExactSolution exact_fields(Ellipsoid const & surface) { return ExactSolution(surface); }

KillingBasis killing_basis(Ellipsoid const & surface)
{
  KillingBasis basis;
  basis.surface = surface;
  basis.fields.push_back(RotationField{0});
  if (surface.is_sphere()) {
    basis.fields.push_back(RotationField{1});
    basis.fields.push_back(RotationField{2});
  }
  return basis;
}

} // namespace surfstokes
