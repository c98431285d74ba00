#include "surfstokes/assembly.hpp"

#include "surfstokes/parallel.hpp"
#include "surfstokes/quadrature.hpp"

#include <exception>
#include <fstream>

namespace surfstokes
{

Eigen::Vector3d barycentric(FaceMap const & map, Vec3 const & x)
{
  Vec2 const xi = map.DA_pinv * (x - map.origin);
  return {1.0 - xi[0] - xi[1], xi[0], xi[1]};
}

namespace
{

Mat3 sym(Mat3 const & G) { return 0.5 * (G + G.transpose()); }

struct FaceData
{
  std::vector<Triplet> A, Mv, B;
};

} // namespace

Mat3 edge_unfolding(EdgeFrame const & fr, Vec3 const & normal_plus, Vec3 const & normal_minus)
{
  Mat3 Fp;
  Mat3 Fm;
  Fp << fr.tangent, -fr.conormal_plus, normal_plus;
  Fm << fr.tangent, fr.conormal_minus, normal_minus;
  return Fp * Fm.transpose();
}

EdgeBlock assemble_edge(TriSurfaceMesh const & mesh, DofMap const & dofs, EdgeFrame const & fr, int edge)
{
  (void)edge;
  EdgeBlock blk;
  int const side_face[2] = {fr.face_plus, fr.face_minus};
  Vec3 const conormal[2] = {fr.conormal_plus, fr.conormal_minus};
  FaceMap const maps[2] = {FaceMap::of(mesh, side_face[0]), FaceMap::of(mesh, side_face[1])};
  for (int s = 0; s < 2; ++s)
    for (int j = 0; j < 6; ++j)
      blk.dofs[6 * s + j] = dofs.face_dofs[side_face[s]][j];

  blk.consistency.setZero();
  blk.jump_mass.setZero();
  // minus-side vectors are unfolded into the plus plane by the rotation
  // about the edge taking (t, n-, nu-) to (t, -n+, nu+)
  Mat3 const R = edge_unfolding(fr, maps[0].normal, maps[1].normal);
  Mat3 const side_map[2] = {Mat3::Identity(), R};
  // Def W n per side is constant along the edge
  std::array<Vec3, 12> def_n;
  for (int s = 0; s < 2; ++s) {
    auto const basis = eval_velocity_basis(maps[s], Eigen::Vector3d::Constant(1.0 / 3.0));
    for (int j = 0; j < 6; ++j)
      def_n[6 * s + j] = dofs.face_signs[side_face[s]][j] * side_map[s] * sym(basis[j].gradient) * conormal[s];
  }
  for (std::size_t q = 0; q < fr.quad_points.size(); ++q) {
    Vec3 const & x = fr.quad_points[q];
    double const w = fr.quad_weights[q];
    // jump [W] = W+ - W- and average {Def W n} = (Def W+ n+ - Def W- n-) / 2
    std::array<Vec3, 12> jump;
    std::array<Vec3, 12> avg;
    for (int s = 0; s < 2; ++s) {
      auto const basis = eval_velocity_basis(maps[s], barycentric(maps[s], x));
      double const side = s == 0 ? 1.0 : -1.0;
      for (int j = 0; j < 6; ++j) {
        jump[6 * s + j] = side * dofs.face_signs[side_face[s]][j] * (side_map[s] * basis[j].value);
        avg[6 * s + j] = 0.5 * side * def_n[6 * s + j];
      }
    }
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        blk.consistency(a, b) -= 2.0 * w * (avg[b].dot(jump[a]) + avg[a].dot(jump[b]));
        blk.jump_mass(a, b) += 2.0 * w * jump[a].dot(jump[b]);
      }
  }
  return blk;
}

FeSystem assemble(TriSurfaceMesh const & mesh, Ellipsoid const & surface, double rho, double kappa)
{
  if (!(rho > 0.0))
    throw Error("assemble: rho must be positive");
  FeSystem sys;
  sys.mesh = mesh;
  sys.dofs = make_dofmap(mesh);
  sys.rho = rho;
  sys.h = metrics(mesh, surface).h;

  int const nv = sys.dofs.n_velocity;
  int const np = sys.dofs.n_pressure;
  int const nf = mesh.num_faces();
  auto const exact = exact_fields(surface);
  auto const killing = killing_basis(surface);
  int const nk = killing.dim();
  sys.dim_killing = nk;

  sys.f_vec = VectorXd::Zero(nv);
  sys.g_vec = VectorXd::Zero(np);
  sys.face_area = VectorXd::Zero(nf);
  sys.k_gram = MatrixXd::Zero(nk, nv);
  sys.gamma_gram = MatrixXd::Zero(nk, nk);

  auto const & rule = triangle_rule_degree4();
  int const workers = thread_count();
  std::vector<FaceData> local(std::max(1, workers));
  std::vector<std::exception_ptr> failures(local.size());

  // face loop: writes to f_vec / k_gram rows of shared DOFs are deferred to
  // per-face buffers and summed serially afterwards
  std::vector<std::array<double, 6>> face_f(nf);
  std::vector<std::vector<std::array<double, 6>>> face_k(nk, std::vector<std::array<double, 6>>(nf));
  std::vector<MatrixXd> gram_part(nf, MatrixXd::Zero(nk, nk));

  parallel_for(nf, workers, [&](int begin, int end, int w) {
    auto & out = local[w];
    try {
      for (int f = begin; f < end; ++f) {
        FaceMap const map = FaceMap::of(mesh, f);
        auto const & fd = sys.dofs.face_dofs[f];
        auto const & fs = sys.dofs.face_signs[f];
        double const area = map.area;
        sys.face_area[f] = area;

        auto const center = eval_velocity_basis(map, Eigen::Vector3d::Constant(1.0 / 3.0));
        for (int i = 0; i < 6; ++i) {
          Mat3 const Di = sym(center[i].gradient);
          for (int j = 0; j < 6; ++j) {
            Mat3 const Dj = sym(center[j].gradient);
            out.A.emplace_back(fd[i], fd[j], 2.0 * area * fs[i] * fs[j] * (Di.array() * Dj.array()).sum());
          }
          out.B.emplace_back(f, fd[i], area * fs[i] * center[i].divergence);
        }

        Eigen::Matrix<double, 6, 6> mass = Eigen::Matrix<double, 6, 6>::Zero();
        std::array<double, 6> fl{};
        std::vector<std::array<double, 6>> kl(nk, std::array<double, 6>{});
        double gl = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          double const wq = rule.weights[q] * area;
          auto const basis = eval_velocity_basis(map, rule.points[q]);
          Vec3 const x = mesh.point(f, rule.points[q]);
          auto const ev = surface.closest_point(x);
          (void)area_ratio(ev, map.normal); // transversality check
          Vec3 const y = ev.point_on_gamma;
          Vec3 fy = exact.forcing(y);
          if (kappa != 0.0)
            fy += kappa * killing.value(0, y);
          gl += wq * exact.divergence(y);
          std::vector<Vec3> ky(nk);
          for (int k = 0; k < nk; ++k)
            ky[k] = killing.value(k, y);
          for (int a = 0; a < nk; ++a)
            for (int b = 0; b < nk; ++b)
              gram_part[f](a, b) += wq * ky[a].dot(ky[b]);
          for (int i = 0; i < 6; ++i) {
            Vec3 const vi = fs[i] * basis[i].value;
            fl[i] += wq * fy.dot(vi);
            for (int k = 0; k < nk; ++k)
              kl[k][i] += wq * ky[k].dot(vi);
            for (int j = 0; j < 6; ++j)
              mass(i, j) += wq * vi.dot(fs[j] * basis[j].value);
          }
        }
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j)
            out.Mv.emplace_back(fd[i], fd[j], mass(i, j));
        face_f[f] = fl;
        for (int k = 0; k < nk; ++k)
          face_k[k][f] = kl[k];
        sys.g_vec[f] = gl;
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  });
  for (auto const & err : failures)
    if (err)
      std::rethrow_exception(err);

  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < 6; ++i) {
      int const dof = sys.dofs.face_dofs[f][i];
      sys.f_vec[dof] += face_f[f][i];
      for (int k = 0; k < nk; ++k)
        sys.k_gram(k, dof) += face_k[k][f][i];
    }
  for (auto const & g : gram_part)
    sys.gamma_gram += g;

  auto build = [](int rows, int cols, std::vector<FaceData> const & parts, auto member) {
    std::vector<Triplet> all;
    for (auto const & p : parts)
      all.insert(all.end(), (p.*member).begin(), (p.*member).end());
    SparseMatrix m(rows, cols);
    m.setFromTriplets(all.begin(), all.end());
    return m;
  };
  sys.A = build(nv, nv, local, &FaceData::A);
  sys.Mv = build(nv, nv, local, &FaceData::Mv);
  sys.B = build(np, nv, local, &FaceData::B);

  // edge terms
  auto const frames = edge_frames(mesh);
  std::vector<std::vector<Triplet>> jc(local.size()), jm(local.size());
  parallel_for(mesh.num_edges(), workers, [&](int begin, int end, int w) {
    for (int e = begin; e < end; ++e) {
      auto const blk = assemble_edge(mesh, sys.dofs, frames[e], e);
      for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b) {
          jc[w].emplace_back(blk.dofs[a], blk.dofs[b], blk.consistency(a, b));
          jm[w].emplace_back(blk.dofs[a], blk.dofs[b], blk.jump_mass(a, b));
        }
    }
  });
  auto join = [nv](std::vector<std::vector<Triplet>> const & parts) {
    std::vector<Triplet> all;
    for (auto const & p : parts)
      all.insert(all.end(), p.begin(), p.end());
    SparseMatrix m(nv, nv);
    m.setFromTriplets(all.begin(), all.end());
    return m;
  };
  sys.Jc = join(jc);
  sys.JM = join(jm);
  sys.J = sys.Jc + (rho / sys.h) * sys.JM;

  // Killing interpolants from the pulled-back analytic fields
  sys.k_interp = MatrixXd::Zero(nv, nk);
  for (int k = 0; k < nk; ++k) {
    auto field = [&](int face, Vec3 const & x) {
      auto const ev = surface.closest_point(x);
      return piola_pullback(ev, mesh.face_normal(face), killing.value(k, ev.point_on_gamma));
    };
    sys.k_interp.col(k) = interpolate_bdm(mesh, sys.dofs, field, 6);
  }
  return sys;
}

EpsilonOperator::EpsilonOperator(FeSystem const & system, double epsilon) : sys_(system), eps_(epsilon)
{
  if (epsilon < 0.0)
    throw Error("EpsilonOperator: epsilon must be nonnegative");
}

SparseMatrix EpsilonOperator::matrix() const
{
  SparseMatrix K = sys_.A + sys_.J;
  if (eps_ != 0.0)
    K += eps_ * sys_.Mv;
  return K;
}

VectorXd EpsilonOperator::apply(VectorXd const & w) const
{
  VectorXd r = sys_.A * w + sys_.J * w;
  if (eps_ != 0.0)
    r += eps_ * (sys_.Mv * w);
  return r;
}

double EpsilonOperator::energy(VectorXd const & w) const { return w.dot(apply(w)); }

void write_matrix_market(SparseMatrix const & m, std::filesystem::path const & path)
{
  std::ofstream out(path);
  if (!out)
    throw Error("write_matrix_market: cannot open " + path.string());
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

} // namespace surfstokes
