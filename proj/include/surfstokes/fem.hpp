#pragma once

#include "surfstokes/mesh.hpp"

#include <array>
#include <functional>

namespace surfstokes
{

/// Lowest-order BDM element on the reference triangle (0,0), (1,0), (0,1).
///
/// Local DOF i = 2 * edge + moment is the normal-trace moment
///   int_e q . n p_moment ds,   p_0 = 1,  p_1 = t - 1/2,
/// with t in [0, 1] running from vertex edge+1 to vertex edge+2.
class ReferenceBdm1
{
public:
  static constexpr int num_dofs = 6;

  /// Shape j is the affine field a_j + B_j xi.
  struct Shape
  {
    Vec2 a;
    Mat2 B;
  };

  static ReferenceBdm1 const & instance();

  [[nodiscard]] Shape const & shape(int j) const { return shapes_[j]; }
  [[nodiscard]] Vec2 value(int j, Vec2 const & xi) const { return shapes_[j].a + shapes_[j].B * xi; }
  [[nodiscard]] double divergence(int j) const { return shapes_[j].B.trace(); }

  [[nodiscard]] static Vec2 vertex(int i);
  /// Outward unit normal of reference edge e.
  [[nodiscard]] static Vec2 edge_normal(int e);
  [[nodiscard]] static double edge_length(int e);

  /// Apply DOF functional i to a reference vector field (Gauss with `points` nodes).
  [[nodiscard]] static double
  apply_dof(int i, std::function<Vec2(Vec2 const &)> const & q, int points = 4);

private:
  ReferenceBdm1();
  std::array<Shape, num_dofs> shapes_;
};

/// Velocity DOFs: two per edge (index 2 e + moment), measured as flux out of
/// the edge's plus face.  Pressure DOFs: one per face.
struct DofMap
{
  int n_velocity = 0;
  int n_pressure = 0;
  std::vector<std::array<int, 6>> face_dofs;
  std::vector<std::array<double, 6>> face_signs;
};

[[nodiscard]] DofMap make_dofmap(TriSurfaceMesh const & mesh);

/// Affine reference-to-face map x = a0 + DA xi, with the Piola factor 1 / jac.
struct FaceMap
{
  Vec3 origin;
  Mat32 DA;
  Eigen::Matrix<double, 2, 3> DA_pinv;
  double jac = 0.0; ///< 2 |T|
  double area = 0.0;
  Vec3 normal;

  [[nodiscard]] static FaceMap of(TriSurfaceMesh const & mesh, int face);
};

struct BasisValue
{
  Vec3 value;
  Mat3 gradient; ///< ambient gradient, tangential to the face on both sides
  double divergence = 0.0;
};

/// The six mapped local basis functions (local sign convention, no global
/// orientation applied) at a barycentric point of the face.
[[nodiscard]] std::array<BasisValue, 6>
eval_velocity_basis(TriSurfaceMesh const & mesh, int face, Eigen::Vector3d const & bary);
[[nodiscard]] std::array<BasisValue, 6> eval_velocity_basis(FaceMap const & map,
                                                            Eigen::Vector3d const & bary);

/// Value of a global velocity field on a face.
[[nodiscard]] Vec3 eval_velocity(TriSurfaceMesh const & mesh,
                                 DofMap const & dofs,
                                 Coefficients const & u,
                                 int face,
                                 Eigen::Vector3d const & bary);
/// Gradient (constant per face) of a global velocity field.
[[nodiscard]] Mat3
velocity_gradient(TriSurfaceMesh const & mesh, DofMap const & dofs, Coefficients const & u, int face);
/// Divergence (constant per face) of a global velocity field.
[[nodiscard]] double
velocity_divergence(TriSurfaceMesh const & mesh, DofMap const & dofs, Coefficients const & u, int face);

/// A field tangent to each face, evaluated with the face it is seen from.
using FaceField = std::function<Vec3(int face, Vec3 const & x)>;
using ScalarFaceField = std::function<double(int face, Vec3 const & x)>;

/// BDM interpolant from edge moments, evaluated from each edge's plus face.
[[nodiscard]] Coefficients interpolate_bdm(TriSurfaceMesh const & mesh,
                                           DofMap const & dofs,
                                           FaceField const & field,
                                           int gauss_points = 4);

/// Piecewise-constant L2 projection (face means).
[[nodiscard]] Coefficients project_pressure(TriSurfaceMesh const & mesh,
                                            ScalarFaceField const & field);

} // namespace surfstokes
