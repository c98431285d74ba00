#include "surfstokes/fem.hpp"

#include "surfstokes/quadrature.hpp"

#include <cmath>

namespace surfstokes
{

Vec2 ReferenceBdm1::vertex(int i)
{
  switch (i % 3) {
  case 0:
    return {0.0, 0.0};
  case 1:
    return {1.0, 0.0};
  default:
    return {0.0, 1.0};
  }
}

Vec2 ReferenceBdm1::edge_normal(int e)
{
  Vec2 const t = vertex(e + 2) - vertex(e + 1);
  return Vec2(t[1], -t[0]).normalized();
}

double ReferenceBdm1::edge_length(int e) { return (vertex(e + 2) - vertex(e + 1)).norm(); }

double ReferenceBdm1::apply_dof(int i, std::function<Vec2(Vec2 const &)> const & q, int points)
{
  int const e = i / 2;
  int const moment = i % 2;
  auto const & rule = gauss_rule(points);
  Vec2 const a = vertex(e + 1);
  Vec2 const b = vertex(e + 2);
  Vec2 const n = edge_normal(e);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    double const t = rule.points[k];
    double const p = moment == 0 ? 1.0 : t - 0.5;
    sum += rule.weights[k] * q(a + t * (b - a)).dot(n) * p;
  }
  return sum * edge_length(e);
}

ReferenceBdm1::ReferenceBdm1()
{
  // monomials (1,0), (xi,0), (eta,0), (0,1), (0,xi), (0,eta)
  auto monomial = [](int m, Vec2 const & x) -> Vec2 {
    double const s = m % 3 == 0 ? 1.0 : (m % 3 == 1 ? x[0] : x[1]);
    return m < 3 ? Vec2(s, 0.0) : Vec2(0.0, s);
  };
  Eigen::Matrix<double, 6, 6> V;
  for (int i = 0; i < num_dofs; ++i)
    for (int m = 0; m < 6; ++m)
      V(i, m) = apply_dof(i, [&](Vec2 const & x) { return monomial(m, x); });
  // columns of C are the monomial coefficients of the dual basis
  Eigen::Matrix<double, 6, 6> const C = V.inverse();
  for (int j = 0; j < num_dofs; ++j) {
    auto const c = C.col(j);
    shapes_[j].a = Vec2(c[0], c[3]);
    shapes_[j].B << c[1], c[2], c[4], c[5];
  }
}

ReferenceBdm1 const & ReferenceBdm1::instance()
{
  static ReferenceBdm1 const element;
  return element;
}

DofMap make_dofmap(TriSurfaceMesh const & mesh)
{
  DofMap map;
  map.n_velocity = 2 * mesh.num_edges();
  map.n_pressure = mesh.num_faces();
  map.face_dofs.resize(mesh.faces.size());
  map.face_signs.resize(mesh.faces.size());
  for (int f = 0; f < mesh.num_faces(); ++f)
    for (int i = 0; i < 3; ++i) {
      int const e = mesh.face_edges[f][i];
      // flux sign follows the face; the affine moment is odd under reversal
      // of the edge, so the two flips cancel
      map.face_dofs[f][2 * i] = 2 * e;
      map.face_dofs[f][2 * i + 1] = 2 * e + 1;
      map.face_signs[f][2 * i] = mesh.face_edge_signs[f][i];
      map.face_signs[f][2 * i + 1] = 1.0;
    }
  return map;
}

FaceMap FaceMap::of(TriSurfaceMesh const & mesh, int face)
{
  FaceMap m;
  auto const & t = mesh.faces[face];
  m.origin = mesh.vertices[t[0]];
  m.DA.col(0) = mesh.vertices[t[1]] - m.origin;
  m.DA.col(1) = mesh.vertices[t[2]] - m.origin;
  Vec3 const cross = m.DA.col(0).cross(m.DA.col(1));
  m.jac = cross.norm();
  if (!(m.jac > 0.0))
    throw DegenerateMeshError("FaceMap: degenerate face");
  m.area = 0.5 * m.jac;
  m.normal = cross / m.jac;
  m.DA_pinv = (m.DA.transpose() * m.DA).inverse() * m.DA.transpose();
  return m;
}

std::array<BasisValue, 6> eval_velocity_basis(FaceMap const & map, Eigen::Vector3d const & bary)
{
  auto const & ref = ReferenceBdm1::instance();
  Vec2 const xi(bary[1], bary[2]);
  std::array<BasisValue, 6> out;
  for (int j = 0; j < 6; ++j) {
    auto const & s = ref.shape(j);
    out[j].value = map.DA * (s.a + s.B * xi) / map.jac;
    out[j].gradient = map.DA * s.B * map.DA_pinv / map.jac;
    out[j].divergence = s.B.trace() / map.jac;
  }
  return out;
}

std::array<BasisValue, 6>
eval_velocity_basis(TriSurfaceMesh const & mesh, int face, Eigen::Vector3d const & bary)
{
  return eval_velocity_basis(FaceMap::of(mesh, face), bary);
}

Vec3 eval_velocity(TriSurfaceMesh const & mesh,
                   DofMap const & dofs,
                   Coefficients const & u,
                   int face,
                   Eigen::Vector3d const & bary)
{
  auto const basis = eval_velocity_basis(mesh, face, bary);
  Vec3 v = Vec3::Zero();
  for (int j = 0; j < 6; ++j)
    v += dofs.face_signs[face][j] * u[dofs.face_dofs[face][j]] * basis[j].value;
  return v;
}

Mat3 velocity_gradient(TriSurfaceMesh const & mesh, DofMap const & dofs, Coefficients const & u, int face)
{
  auto const basis = eval_velocity_basis(mesh, face, Eigen::Vector3d::Constant(1.0 / 3.0));
  Mat3 g = Mat3::Zero();
  for (int j = 0; j < 6; ++j)
    g += dofs.face_signs[face][j] * u[dofs.face_dofs[face][j]] * basis[j].gradient;
  return g;
}

double velocity_divergence(TriSurfaceMesh const & mesh, DofMap const & dofs, Coefficients const & u, int face)
{
  auto const basis = eval_velocity_basis(mesh, face, Eigen::Vector3d::Constant(1.0 / 3.0));
  double d = 0.0;
  for (int j = 0; j < 6; ++j)
    d += dofs.face_signs[face][j] * u[dofs.face_dofs[face][j]] * basis[j].divergence;
  return d;
}

Coefficients interpolate_bdm(TriSurfaceMesh const & mesh,
                             DofMap const & dofs,
                             FaceField const & field,
                             int gauss_points)
{
  auto const & rule = gauss_rule(gauss_points);
  auto const frames = edge_frames(mesh);
  Coefficients c = Coefficients::Zero(dofs.n_velocity);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto const & fr = frames[e];
    Vec3 const a = mesh.vertices[mesh.edges[e][0]];
    Vec3 const b = mesh.vertices[mesh.edges[e][1]];
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      double const t = rule.points[k];
      double const flux = field(fr.face_plus, a + t * (b - a)).dot(fr.conormal_plus);
      m0 += rule.weights[k] * flux;
      m1 += rule.weights[k] * flux * (t - 0.5);
    }
    c[2 * e] = m0 * fr.length;
    c[2 * e + 1] = m1 * fr.length;
  }
  return c;
}

Coefficients project_pressure(TriSurfaceMesh const & mesh, ScalarFaceField const & field)
{
  auto const & rule = triangle_rule_degree4();
  Coefficients p(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      s += rule.weights[q] * field(f, mesh.point(f, rule.points[q]));
    p[f] = s;
  }
  return p;
}

} // namespace surfstokes
