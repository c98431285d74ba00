#include "surfstokes/assembly.hpp"
#include "surfstokes/exact_fields.hpp"
#include "surfstokes/quadrature.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace surfstokes;

namespace
{

VectorXd random_vector(int n, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = u(rng);
  return v;
}

Eigen::Vector3d bary_of(TriSurfaceMesh const & m, int f, Vec3 const & x)
{
  return barycentric(FaceMap::of(m, f), x);
}

} // namespace

TEST(ReferenceBdm1, DofShapeDuality)
{
  auto const & ref = ReferenceBdm1::instance();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double const v = ReferenceBdm1::apply_dof(i, [&](Vec2 const & xi) { return ref.value(j, xi); });
      EXPECT_NEAR(v, i == j ? 1.0 : 0.0, 1e-13) << i << ' ' << j;
    }
}

TEST(ReferenceBdm1, EdgeGeometry)
{
  for (int e = 0; e < 3; ++e) {
    Vec2 const a = ReferenceBdm1::vertex((e + 1) % 3), b = ReferenceBdm1::vertex((e + 2) % 3);
    EXPECT_NEAR(ReferenceBdm1::edge_length(e), (b - a).norm(), 1e-15);
    Vec2 const n = ReferenceBdm1::edge_normal(e);
    EXPECT_NEAR(n.norm(), 1.0, 1e-15);
    EXPECT_NEAR(n.dot(b - a), 0.0, 1e-15);
    EXPECT_GT(n.dot(a - ReferenceBdm1::vertex(e)), 0.0);
  }
}

TEST(ReferenceBdm1, ShapesSpanAffineFields)
{
  // DOF interpolation of an affine field reproduces it
  auto const & ref = ReferenceBdm1::instance();
  Vec2 const a(0.3, -1.1);
  Mat2 B;
  B << 0.7, 2.0, -0.4, 1.3;
  auto q = [&](Vec2 const & xi) { return Vec2(a + B * xi); };
  for (Vec2 const xi : {Vec2(0.2, 0.3), Vec2(0.0, 1.0), Vec2(0.5, 0.1)}) {
    Vec2 s = Vec2::Zero();
    for (int j = 0; j < 6; ++j)
      s += ReferenceBdm1::apply_dof(j, q) * ref.value(j, xi);
    EXPECT_NEAR((s - q(xi)).norm(), 0.0, 1e-13);
  }
}

TEST(PhysicalBasis, ReferenceFaceInPlaneIsIdentity)
{
  TriSurfaceMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}, {0, 2, 1}};
  auto const & ref = ReferenceBdm1::instance();
  for (Eigen::Vector3d const bary : {Eigen::Vector3d(1. / 3, 1. / 3, 1. / 3), Eigen::Vector3d(0.1, 0.6, 0.3)}) {
    Vec2 const xi(bary[1], bary[2]);
    auto const b = eval_velocity_basis(m, 0, bary);
    for (int j = 0; j < 6; ++j) {
      Vec2 const r = ref.value(j, xi);
      EXPECT_NEAR((b[j].value - Vec3(r[0], r[1], 0.0)).norm(), 0.0, 1e-14);
      EXPECT_NEAR(b[j].divergence, ref.divergence(j), 1e-14);
    }
  }
}

TEST(PhysicalBasis, TangentAndDivergenceMatchesFiniteDifference)
{
  auto const m = icosphere(Ellipsoid(1.25), 1, 0.1);
  for (int f = 0; f < m.num_faces(); ++f) {
    FaceMap const map = FaceMap::of(m, f);
    Vec3 const n = map.normal;
    Vec3 const t1 = (m.vertices[m.faces[f][1]] - m.vertices[m.faces[f][0]]).normalized();
    Vec3 const t2 = n.cross(t1);
    Vec3 const c = m.face_centroid(f);
    auto const b = eval_velocity_basis(map, Eigen::Vector3d::Constant(1.0 / 3.0));
    double const e = 1e-3;
    for (int j = 0; j < 6; ++j) {
      EXPECT_NEAR(b[j].value.dot(n), 0.0, 1e-13);
      auto val = [&](Vec3 const & x) { return eval_velocity_basis(map, barycentric(map, x))[j].value; };
      double const fd = (val(c + e * t1) - val(c - e * t1)).dot(t1) / (2 * e)
                        + (val(c + e * t2) - val(c - e * t2)).dot(t2) / (2 * e);
      EXPECT_NEAR(b[j].divergence, fd, 1e-8);
      EXPECT_NEAR(b[j].divergence, b[j].gradient.trace(), 1e-12);
    }
  }
}

TEST(DofMap, SizesAndOrientation)
{
  auto const m = icosphere(Ellipsoid(1.0), 2);
  auto const d = make_dofmap(m);
  EXPECT_EQ(d.n_velocity, 2 * m.num_edges());
  EXPECT_EQ(d.n_pressure, m.num_faces());
  std::vector<int> count(d.n_velocity, 0);
  for (int f = 0; f < m.num_faces(); ++f)
    for (int i = 0; i < 6; ++i) {
      ++count[d.face_dofs[f][i]];
      EXPECT_EQ(std::abs(d.face_signs[f][i]), 1.0);
    }
  for (int c : count)
    EXPECT_EQ(c, 2);
}

TEST(Interpolation, NormalMomentsContinuousForRandomCoefficients)
{
  auto const m = icosphere(Ellipsoid(1.25), 2, 0.1);
  auto const d = make_dofmap(m);
  auto const frames = edge_frames(m);
  auto const & g = gauss_rule(4);
  for (unsigned seed = 0; seed < 3; ++seed) {
    VectorXd const U = random_vector(d.n_velocity, seed);
    double worst = 0.0;
    for (int e = 0; e < m.num_edges(); ++e) {
      auto const & fr = frames[e];
      Vec3 const a = m.vertices[m.edges[e][0]], b = m.vertices[m.edges[e][1]];
      double mom[2] = {0.0, 0.0};
      for (int q = 0; q < 4; ++q) {
        double const t = g.points[q];
        Vec3 const x = a + t * (b - a);
        Vec3 const up = eval_velocity(m, d, U, fr.face_plus, bary_of(m, fr.face_plus, x));
        Vec3 const um = eval_velocity(m, d, U, fr.face_minus, bary_of(m, fr.face_minus, x));
        double const flux = up.dot(fr.conormal_plus) + um.dot(fr.conormal_minus);
        mom[0] += g.weights[q] * fr.length * flux;
        mom[1] += g.weights[q] * fr.length * flux * (t - 0.5);
      }
      worst = std::max({worst, std::abs(mom[0]), std::abs(mom[1])});
    }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Interpolation, TangentialJumpIsGenerallyNonzero)
{
  auto const m = icosphere(Ellipsoid(1.0), 1);
  auto const d = make_dofmap(m);
  auto const frames = edge_frames(m);
  VectorXd const U = random_vector(d.n_velocity, 1);
  Vec3 const x = 0.5 * (m.vertices[m.edges[0][0]] + m.vertices[m.edges[0][1]]);
  Vec3 const up = eval_velocity(m, d, U, frames[0].face_plus, bary_of(m, frames[0].face_plus, x));
  Vec3 const um = eval_velocity(m, d, U, frames[0].face_minus, bary_of(m, frames[0].face_minus, x));
  EXPECT_GT((up - um).norm(), 1e-6);
}

TEST(Interpolation, ProjectionProperty)
{
  auto const m = icosphere(Ellipsoid(2.0), 2, 0.1);
  auto const d = make_dofmap(m);
  VectorXd const U = random_vector(d.n_velocity, 4);
  auto const I = interpolate_bdm(m, d, [&](int f, Vec3 const & x) { return eval_velocity(m, d, U, f, bary_of(m, f, x)); });
  EXPECT_LE((I - U).lpNorm<Eigen::Infinity>(), 1e-12);
  auto const Z = interpolate_bdm(m, d, [](int, Vec3 const &) { return Vec3::Zero(); });
  EXPECT_EQ(Z.norm(), 0.0);
}

TEST(Interpolation, CommutingDiagram)
{
  Ellipsoid const s(1.25);
  auto const m = icosphere(s, 3, 0.1);
  auto const d = make_dofmap(m);
  ManufacturedVelocity const u{s};
  auto field = [&](int f, Vec3 const & x) {
    auto const ev = s.closest_point(x);
    return piola_pullback(ev, m.face_normal(f), ad::to_vec(u(ad::to_array(ev.point_on_gamma))));
  };
  VectorXd const I = interpolate_bdm(m, d, field, 6);
  auto const rule = composite_triangle_rule(3);
  for (int f = 0; f < m.num_faces(); f += 5) {
    // P0 projection of div_Gamma q_bar = mu (div_gamma u) o P
    Vec3 const n = m.face_normal(f);
    double mean = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto const ev = s.closest_point(m.point(f, rule.points[q]));
      mean += rule.weights[q] * area_ratio(ev, n) * ad::surface_divergence(s, u, ev.point_on_gamma);
    }
    EXPECT_NEAR(velocity_divergence(m, d, I, f), mean, 1e-10) << "face " << f;
  }
}

TEST(PressureProjection, ConstantsMeansAndLinears)
{
  auto const m = icosphere(Ellipsoid(1.1), 2, 0.1);
  auto const one = project_pressure(m, [](int, Vec3 const &) { return 1.0; });
  EXPECT_LE((one - VectorXd::Ones(m.num_faces())).lpNorm<Eigen::Infinity>(), 1e-14);
  Vec3 const a(0.3, -0.7, 1.9);
  auto const zero = project_pressure(m, [&](int f, Vec3 const & x) { return a.dot(x - m.face_centroid(f)); });
  EXPECT_LE(zero.lpNorm<Eigen::Infinity>(), 1e-14);
  auto const lin = project_pressure(m, [&](int, Vec3 const & x) { return 2.0 + a.dot(x); });
  for (int f = 0; f < m.num_faces(); ++f)
    EXPECT_NEAR(lin[f], 2.0 + a.dot(m.face_centroid(f)), 1e-14);
}
