#include "surfstokes/solver.hpp"

#include <Eigen/SparseLU>
#ifdef SURFSTOKES_HAVE_UMFPACK
#include <umfpack.h>
#endif

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

namespace surfstokes
{

#ifdef SURFSTOKES_HAVE_UMFPACK
// Direct use of the C interface; Eigen 3.4.0's UmfPackLU returned wrong
// solutions for these matrices.
class UmfpackLU
{
public:
  UmfpackLU()
  {
    umfpack_di_defaults(control_);
    control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
    control_[UMFPACK_IRSTEP] = 0; // refinement is done on the bordered system
  }
  ~UmfpackLU()
  {
    if (numeric_ != nullptr)
      umfpack_di_free_numeric(&numeric_);
  }
  UmfpackLU(UmfpackLU const &) = delete;
  UmfpackLU & operator=(UmfpackLU const &) = delete;

  void analyzePattern(SparseMatrix const &) {}
  void factorize(SparseMatrix const & m)
  {
    m_ = &m;
    void * symbolic = nullptr;
    double info[UMFPACK_INFO];
    int status = umfpack_di_symbolic(static_cast<int>(m.rows()), static_cast<int>(m.cols()), m.outerIndexPtr(),
                                     m.innerIndexPtr(), m.valuePtr(), &symbolic, control_, info);
    if (status == UMFPACK_OK)
      status = umfpack_di_numeric(m.outerIndexPtr(), m.innerIndexPtr(), m.valuePtr(), symbolic, &numeric_,
                                  control_, info);
    if (symbolic != nullptr)
      umfpack_di_free_symbolic(&symbolic);
    ok_ = status == UMFPACK_OK;
  }
  [[nodiscard]] Eigen::ComputationInfo info() const { return ok_ ? Eigen::Success : Eigen::NumericalIssue; }
  [[nodiscard]] VectorXd solve(VectorXd const & b) const
  {
    VectorXd x(b.size());
    double info[UMFPACK_INFO];
    int const status = umfpack_di_solve(UMFPACK_A, m_->outerIndexPtr(), m_->innerIndexPtr(), m_->valuePtr(),
                                        x.data(), b.data(), numeric_, control_, info);
    ok_ = status == UMFPACK_OK;
    return x;
  }

private:
  SparseMatrix const * m_ = nullptr;
  void * numeric_ = nullptr;
  double control_[UMFPACK_CONTROL];
  mutable bool ok_ = false;
};
#endif

// The mean-value row of the saddle matrix is dense and ruins the fill of a
// sparse LU.  We factor the matrix with that border replaced by a single
// pinned pressure and restore the border by a rank-2 Woodbury correction:
// M = M0 + U W^T with U = [u v], W = [v u].
struct SaddlePointSolver::Factorization
{
#ifdef SURFSTOKES_HAVE_UMFPACK
  std::unique_ptr<UmfpackLU> umf;
#endif
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> slu;
  Eigen::Matrix<double, Eigen::Dynamic, 2> U, W, Z;
  Eigen::Matrix2d capacitance;
  SparseMatrix pinned; // referenced by the UMFPACK solves
  bool failed = false;

  void factorize(SparseMatrix m0, SparseMatrix const & full, Eigen::Matrix<double, Eigen::Dynamic, 2> u,
                 Eigen::Matrix<double, Eigen::Dynamic, 2> w)
  {
    pinned = std::move(m0);
    U = std::move(u);
    W = std::move(w);
#ifdef SURFSTOKES_HAVE_UMFPACK
    umf = std::make_unique<UmfpackLU>();
    umf->factorize(pinned);
    if (umf->info() == Eigen::Success && prepare()) {
      // the factorization depends on the BLAS underneath; check one solve
      VectorXd b = VectorXd::Ones(full.rows());
      VectorXd const x = solve(full, b);
      double const res = (full * x - b).norm() / b.norm();
      if (ok() && x.allFinite() && res < 1e-6)
        return;
      warn_once(res);
    }
    umf.reset();
#endif
    slu = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
    slu->analyzePattern(pinned);
    slu->factorize(pinned);
    if (slu->info() == Eigen::Success)
      static_cast<void>(prepare());
  }

  [[nodiscard]] bool prepare()
  {
    Z.resize(U.rows(), 2);
    for (int k = 0; k < 2; ++k)
      Z.col(k) = solve_pinned(U.col(k));
    capacitance = Eigen::Matrix2d::Identity() + W.transpose() * Z;
    failed = !ok() || !Z.allFinite() || std::abs(capacitance.determinant()) < 1e-14;
    return !failed;
  }

  [[nodiscard]] bool ok() const
  {
    if (failed)
      return false;
#ifdef SURFSTOKES_HAVE_UMFPACK
    if (umf)
      return umf->info() == Eigen::Success;
#endif
    return slu && slu->info() == Eigen::Success;
  }

  [[nodiscard]] VectorXd solve_pinned(VectorXd const & b) const
  {
#ifdef SURFSTOKES_HAVE_UMFPACK
    if (umf)
      return umf->solve(b);
#endif
    return slu->solve(b);
  }

  [[nodiscard]] VectorXd solve_bordered(VectorXd const & b) const
  {
    VectorXd const y = solve_pinned(b);
    Eigen::Vector2d const c = capacitance.partialPivLu().solve(W.transpose() * y);
    return y - Z * c;
  }

  /// with one step of iterative refinement on the full matrix
  [[nodiscard]] VectorXd solve(SparseMatrix const & full, VectorXd const & b) const
  {
    VectorXd x = solve_bordered(b);
    x += solve_bordered(b - full * x);
    return x;
  }

  static void warn_once([[maybe_unused]] double res)
  {
    static bool warned = false;
    if (!warned) {
      warned = true;
      std::cerr << "warning: UMFPACK self-check failed (relative residual " << res
                << "); using SparseLU.  A broken BLAS kernel is the usual cause; try "
                   "OPENBLAS_CORETYPE=Haswell.\n";
    }
  }
};

SaddlePointSolver::SaddlePointSolver(FeSystem const & system, double epsilon)
  : sys_(system), eps_(epsilon), lu_(std::make_unique<Factorization>())
{
  if (epsilon < 0.0)
    throw Error("SaddlePointSolver: epsilon must be nonnegative");
  if (epsilon == 0.0 && system.dim_killing > 0)
    throw SingularSystemError("SaddlePointSolver: eps = 0 leaves the Killing fields in the "
                              "kernel of the velocity block; use eps > 0");
  int const nv = system.n_velocity();
  int const np = system.n_pressure();
  SparseMatrix const K = EpsilonOperator(system, epsilon).matrix();

  std::vector<Triplet> t;
  t.reserve(K.nonZeros() + 2 * system.B.nonZeros() + 2 * np);
  for (int k = 0; k < K.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(K, k); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < system.B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(system.B, k); it; ++it) {
      t.emplace_back(nv + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nv + it.row(), it.value());
    }
  int const n = nv + np + 1;
  SparseMatrix pinned(n, n);
  double const pin = system.face_area[0];
  t.emplace_back(nv, n - 1, pin);
  t.emplace_back(n - 1, nv, pin);
  pinned.setFromTriplets(t.begin(), t.end());
  pinned.makeCompressed();
  t.resize(t.size() - 2);
  for (int q = 0; q < np; ++q) {
    t.emplace_back(nv + q, n - 1, system.face_area[q]);
    t.emplace_back(n - 1, nv + q, system.face_area[q]);
  }
  M_.resize(n, n);
  M_.setFromTriplets(t.begin(), t.end());
  M_.makeCompressed();

  Eigen::Matrix<double, Eigen::Dynamic, 2> u = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(n, 2);
  u(n - 1, 0) = 1.0;
  u.col(1).segment(nv, np) = system.face_area;
  u(nv, 1) -= pin;
  Eigen::Matrix<double, Eigen::Dynamic, 2> w(n, 2);
  w.col(0) = u.col(1);
  w.col(1) = u.col(0);
  lu_->factorize(std::move(pinned), M_, std::move(u), std::move(w));
  if (!lu_->ok()) {
    std::ostringstream msg;
    msg << "SaddlePointSolver: factorization failed (eps = " << epsilon << ", n = " << M_.rows() << ")";
    throw SingularSystemError(msg.str());
  }
}

SaddlePointSolver::~SaddlePointSolver() = default;

SaddlePointSolver::Result SaddlePointSolver::solve(VectorXd const & f, VectorXd const & g) const
{
  int const nv = sys_.n_velocity();
  int const np = sys_.n_pressure();
  VectorXd rhs = VectorXd::Zero(nv + np + 1);
  rhs.head(nv) = f;
  rhs.segment(nv, np) = g;
  VectorXd x = lu_->solve(M_, rhs);
  if (!lu_->ok() || !x.allFinite())
    throw SingularSystemError("SaddlePointSolver: solve failed");
  Result r;
  r.U = x.head(nv);
  r.P = -x.segment(nv, np);
  r.multiplier = x[nv + np];
  double const scale = std::max(rhs.norm(), 1e-300);
  r.residual = (M_ * x - rhs).norm() / scale;
  if (rhs.norm() == 0.0)
    r.residual = (M_ * x).norm();
  return r;
}

VectorXd SaddlePointSolver::solve_velocity(VectorXd const & f) const
{
  int const nv = sys_.n_velocity();
  VectorXd rhs = VectorXd::Zero(M_.rows());
  rhs.head(nv) = f;
  VectorXd x = lu_->solve(M_, rhs);
  if (!lu_->ok() || !x.allFinite())
    throw SingularSystemError("SaddlePointSolver: solve failed");
  return x.head(nv);
}

StokesSolution solve_stokes(SaddlePointSolver const & solver, VectorXd const & f, VectorXd const & g)
{
  auto const r = solver.solve(f, g);
  StokesSolution s;
  s.U = r.U;
  s.P = r.P;
  s.epsilon = solver.epsilon();
  s.residual_norm = r.residual;
  s.ill_conditioned = r.residual > 1e-8;
  if (s.ill_conditioned)
    std::cerr << "warning: saddle point residual " << r.residual << " (eps = " << s.epsilon << ")\n";
  return s;
}

StokesSolution solve_stokes(FeSystem const & system, double epsilon)
{
  SaddlePointSolver const solver(system, epsilon);
  return solve_stokes(solver, system.f_vec, system.g_vec);
}

EigenSet solve_eigen(FeSystem const & system, int k, EigenOptions const & options)
{
  SaddlePointSolver const stabilized(system, 1.0);
  return solve_eigen(stabilized, k, options);
}

EigenSet solve_eigen(SaddlePointSolver const & stabilized, int k, EigenOptions const & options)
{
  if (stabilized.epsilon() != 1.0)
    throw Error("solve_eigen: the factorization must use eps = 1");
  FeSystem const & sys = stabilized.system();
  int const nv = sys.n_velocity();
  int const constrained = nv - (sys.n_pressure() - 1);
  if (k < 1 || k > 10)
    throw Error("solve_eigen: k must be in [1, 10]");
  int const m = std::min(k + options.block_extra, constrained);
  if (k > constrained)
    throw Error("solve_eigen: k exceeds the dimension of the divergence-free subspace");

  EpsilonOperator const K1(sys, 1.0);
  std::mt19937 rng(options.seed);
  std::normal_distribution<double> normal;
  MatrixXd X(nv, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < nv; ++i)
      X(i, j) = normal(rng);
  for (int j = 0; j < m; ++j)
    X.col(j) = stabilized.solve_velocity(sys.Mv * X.col(j));

  // X is Mv-orthonormal after each Rayleigh-Ritz step; Y = S Mv X of the next
  // sweep gives the pencil residuals theta_i Y_i - X_i without extra solves.
  EigenSet out;
  VectorXd theta;
  std::vector<double> res(k, std::numeric_limits<double>::infinity());
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    MatrixXd Y(nv, m);
    for (int j = 0; j < m; ++j)
      Y.col(j) = stabilized.solve_velocity(sys.Mv * X.col(j));
    if (it > 0) {
      bool done = true;
      for (int i = 0; i < k; ++i) {
        VectorXd const r = theta[i] * Y.col(i) - X.col(i);
        res[i] = std::sqrt(std::max(0.0, r.dot(sys.Mv * r)));
        if (!(res[i] <= options.tolerance))
          done = false;
      }
      if (done) {
        converged = true;
        break;
      }
    }
    MatrixXd KY(nv, m);
    MatrixXd MY(nv, m);
    for (int j = 0; j < m; ++j) {
      KY.col(j) = K1.apply(Y.col(j));
      MY.col(j) = sys.Mv * Y.col(j);
    }
    MatrixXd Ka = Y.transpose() * KY;
    MatrixXd Ma = Y.transpose() * MY;
    Ka = 0.5 * (Ka + Ka.transpose()).eval();
    Ma = 0.5 * (Ma + Ma.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Ka, Ma);
    if (ges.info() != Eigen::Success)
      throw ConvergenceError("solve_eigen: Rayleigh-Ritz step failed");
    theta = ges.eigenvalues();
    X = Y * ges.eigenvectors();
  }

  // residual of the constrained pencil: || theta S(Mv x) - x ||_Mv
  out.iterations = it;
  for (int i = 0; i < k; ++i) {
    out.values.push_back(theta[i] - 1.0);
    out.vectors.push_back(X.col(i));
    out.residuals.push_back(res[i]);
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "solve_eigen: no convergence after " << options.max_iterations << " iterations; residuals";
    for (double r : out.residuals)
      msg << ' ' << r;
    throw ConvergenceError(msg.str());
  }
  return out;
}

KillingProjection project_analytic_killing(FeSystem const & system, Coefficients const & U)
{
  if (system.dim_killing == 0)
    throw Error("project_analytic_killing: empty Killing basis");
  MatrixXd const MK = system.Mv * system.k_interp;
  MatrixXd const G = system.k_interp.transpose() * MK;
  Eigen::LDLT<MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw SingularSystemError("project_analytic_killing: singular Gram matrix");
  KillingProjection p;
  p.coefficients = ldlt.solve(MK.transpose() * U);
  p.projection = system.k_interp * p.coefficients;
  p.remainder = U - p.projection;
  return p;
}

Coefficients project_discrete_killing(FeSystem const & system,
                                      EigenSet const & eigs,
                                      std::vector<int> const & J,
                                      Coefficients const & U)
{
  Coefficients out = U;
  VectorXd const MU = system.Mv * U;
  for (int j : J) {
    if (j < 1 || j > eigs.size())
      throw Error("project_discrete_killing: index out of range");
    auto const & v = eigs.vectors[j - 1];
    out -= MU.dot(v) * v;
  }
  return out;
}

} // namespace surfstokes
