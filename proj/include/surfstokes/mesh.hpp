#pragma once

#include "surfstokes/geometry.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace surfstokes
{

/// Closed triangulated surface whose vertices lie on the continuous surface.
///
/// Faces are counter-clockwise seen from outside.  Local edge i of a face is
/// the edge opposite local vertex i, traversed from vertex i+1 to vertex i+2.
/// Every global edge is stored low index first; its "plus" face is the one
/// whose counter-clockwise traversal runs low -> high.
struct TriSurfaceMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> face_edges;
  /// +1 where the local traversal agrees with the global edge direction.
  std::vector<std::array<int, 3>> face_edge_signs;
  /// {plus face, minus face} of each edge.
  std::vector<std::array<int, 2>> edge_faces;

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices.size()); }
  [[nodiscard]] int num_faces() const { return static_cast<int>(faces.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges.size()); }

  [[nodiscard]] Vec3 face_normal(int f) const;
  [[nodiscard]] double face_area(int f) const;
  [[nodiscard]] Vec3 face_centroid(int f) const;
  [[nodiscard]] double face_diameter(int f) const;
  /// Physical point of face f at barycentric coordinates (l0, l1, l2).
  [[nodiscard]] Vec3 point(int f, Eigen::Vector3d const & bary) const;
  /// Local index (0..2) of global edge e within face f.
  [[nodiscard]] int local_edge(int f, int e) const;
};

struct MeshMetrics
{
  double h = 0.0;               ///< max face diameter
  std::vector<double> h_T;      ///< |T|^{1/2} per face
  double sigma1 = 0.0;          ///< max diam(T) / h_T
  double sigma2 = 0.0;          ///< max h_T / min h_T
  int valence_max = 0;
  double min_transversality = 0.0; ///< min nu . nu_Gamma at face centroids
};

struct EdgeFrame
{
  double length = 0.0;
  Vec3 tangent;                 ///< unit vector low -> high vertex
  Vec3 conormal_plus;
  Vec3 conormal_minus;
  int face_plus = -1;
  int face_minus = -1;
  std::vector<Vec3> quad_points;
  std::vector<double> quad_weights; ///< include the edge length
};

/// Fill edges, face_edges, face_edge_signs and edge_faces from vertices/faces.
/// Throws DegenerateMeshError when the surface is not a closed 2-manifold.
void build_connectivity(TriSurfaceMesh & mesh);

/// Icosahedron refined `level` times by 1 -> 4 midpoint subdivision, every new
/// vertex projected onto the surface.  A positive `jitter` first moves the
/// twelve base vertices tangentially by up to jitter x (base edge length),
/// seeded, which removes the icosahedral symmetry.
[[nodiscard]] TriSurfaceMesh
icosphere(Ellipsoid const & surface, int level, double jitter = 0.0, unsigned seed = 1);

[[nodiscard]] MeshMetrics metrics(TriSurfaceMesh const & mesh, Ellipsoid const & surface);

[[nodiscard]] std::vector<EdgeFrame> edge_frames(TriSurfaceMesh const & mesh);

void write_off(TriSurfaceMesh const & mesh, std::filesystem::path const & path);
[[nodiscard]] TriSurfaceMesh read_off(std::filesystem::path const & path);

} // namespace surfstokes
