#pragma once

#include "surfstokes/exact_fields.hpp"
#include "surfstokes/fem.hpp"

#include <filesystem>

namespace surfstokes
{

/// Every assembled operator of the interior penalty method on one mesh.
///
/// Sign convention of the saddle system: K U + B^T P' = f, B U = g with
/// K = A + J + eps Mv and P' = -p (see solver).
struct FeSystem
{
  TriSurfaceMesh mesh;
  DofMap dofs;
  double rho = 10.0;
  double h = 0.0; ///< global mesh size used in rho / h

  SparseMatrix A;  ///< 2 int Def : Def, broken
  SparseMatrix Jc; ///< consistency part of j
  SparseMatrix JM; ///< 2 int_Sigma [W] . [V]
  SparseMatrix J;  ///< Jc + (rho / h) JM
  SparseMatrix Mv;
  SparseMatrix B; ///< pressure x velocity, int q div v

  VectorXd f_vec; ///< int_Gamma (f o P) . v_i
  VectorXd g_vec; ///< int_Gamma (g o P) q
  VectorXd face_area;

  int dim_killing = 0;
  MatrixXd k_gram;     ///< dim K x n_velocity, int_Gamma (k_j o P) . v_i
  MatrixXd k_interp;   ///< n_velocity x dim K, BDM interpolants of the pulled-back k_j
  MatrixXd gamma_gram; ///< dim K x dim K, int_Gamma (k_i o P) . (k_j o P)

  [[nodiscard]] int n_velocity() const { return dofs.n_velocity; }
  [[nodiscard]] int n_pressure() const { return dofs.n_pressure; }
};

/// Assemble all forms.  `kappa` adds kappa k_1 to the forcing (the
/// f + kappa k_1 experiments).
[[nodiscard]] FeSystem
assemble(TriSurfaceMesh const & mesh, Ellipsoid const & surface, double rho, double kappa = 0.0);

/// A + J + eps Mv, without copying the system.
class EpsilonOperator
{
public:
  EpsilonOperator(FeSystem const & system, double epsilon);

  [[nodiscard]] double epsilon() const { return eps_; }
  [[nodiscard]] SparseMatrix matrix() const;
  [[nodiscard]] VectorXd apply(VectorXd const & w) const;
  [[nodiscard]] double energy(VectorXd const & w) const;

private:
  FeSystem const & sys_;
  double eps_;
};

/// Barycentric coordinates of a point in the plane of face f.
[[nodiscard]] Eigen::Vector3d barycentric(FaceMap const & map, Vec3 const & x);

/// Rotation about the edge carrying the minus face onto the plane of the
/// plus face (identity for coplanar faces).  Jumps and averages compare
/// W+ with R W-.
[[nodiscard]] Mat3 edge_unfolding(EdgeFrame const & frame, Vec3 const & normal_plus, Vec3 const & normal_minus);

/// Dense element blocks of one edge: local DOF order is the six DOFs of the
/// plus face followed by the six of the minus face (global signs applied).
struct EdgeBlock
{
  std::array<int, 12> dofs;
  Eigen::Matrix<double, 12, 12> consistency;
  Eigen::Matrix<double, 12, 12> jump_mass;
};

[[nodiscard]] EdgeBlock assemble_edge(TriSurfaceMesh const & mesh,
                                      DofMap const & dofs,
                                      EdgeFrame const & frame,
                                      int edge);

/// MatrixMarket coordinate dump.
void write_matrix_market(SparseMatrix const & m, std::filesystem::path const & path);

} // namespace surfstokes
