#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace surfstokes
{

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Coefficient vector of a finite element function (velocity or pressure).
using Coefficients = Eigen::VectorXd;

struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// Closest-point iteration left the admissible tubular neighbourhood.
struct ProjectionError : Error
{
  using Error::Error;
};

/// The discrete surface is not transverse to the continuous one (nu . nu_Gamma <= 0).
struct TransversalityError : Error
{
  using Error::Error;
};

struct DegenerateMeshError : Error
{
  using Error::Error;
};

struct SingularSystemError : Error
{
  using Error::Error;
};

struct ConvergenceError : Error
{
  using Error::Error;
};

} // namespace surfstokes
