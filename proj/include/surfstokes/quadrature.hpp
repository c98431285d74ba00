#pragma once

#include "surfstokes/types.hpp"

#include <vector>

namespace surfstokes
{

/// Points in barycentric coordinates, weights summing to 1 (multiply by area).
struct TriangleRule
{
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
};

/// Points in [0, 1], weights summing to 1 (multiply by length).
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
};

/// Six-point symmetric rule, exact for degree 4.
[[nodiscard]] TriangleRule const & triangle_rule_degree4();

/// Composite rule: the degree-4 rule on each of 4^levels congruent subtriangles.
[[nodiscard]] TriangleRule composite_triangle_rule(int levels);

/// n-point Gauss-Legendre on [0, 1], exact for degree 2n - 1 (1 <= n <= 6).
[[nodiscard]] LineRule const & gauss_rule(int n);

} // namespace surfstokes
