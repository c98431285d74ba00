#include "surfstokes/mesh.hpp"

#include "surfstokes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace surfstokes
{

Vec3 TriSurfaceMesh::face_normal(int f) const
{
  auto const & t = faces[f];
  return (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).normalized();
}

double TriSurfaceMesh::face_area(int f) const
{
  auto const & t = faces[f];
  return 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
}

Vec3 TriSurfaceMesh::face_centroid(int f) const
{
  auto const & t = faces[f];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

double TriSurfaceMesh::face_diameter(int f) const
{
  auto const & t = faces[f];
  return std::max({(vertices[t[0]] - vertices[t[1]]).norm(),
                   (vertices[t[1]] - vertices[t[2]]).norm(),
                   (vertices[t[2]] - vertices[t[0]]).norm()});
}

Vec3 TriSurfaceMesh::point(int f, Eigen::Vector3d const & bary) const
{
  auto const & t = faces[f];
  return bary[0] * vertices[t[0]] + bary[1] * vertices[t[1]] + bary[2] * vertices[t[2]];
}

int TriSurfaceMesh::local_edge(int f, int e) const
{
  for (int i = 0; i < 3; ++i)
    if (face_edges[f][i] == e)
      return i;
  throw Error("local_edge: edge not on face");
}

void build_connectivity(TriSurfaceMesh & mesh)
{
  std::map<std::pair<int, int>, int> index;
  mesh.edges.clear();
  mesh.edge_faces.clear();
  mesh.face_edges.assign(mesh.faces.size(), {-1, -1, -1});
  mesh.face_edge_signs.assign(mesh.faces.size(), {0, 0, 0});

  for (int f = 0; f < mesh.num_faces(); ++f) {
    auto const & t = mesh.faces[f];
    for (int i = 0; i < 3; ++i) {
      int const a = t[(i + 1) % 3];
      int const b = t[(i + 2) % 3];
      auto const key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back({key.first, key.second});
        mesh.edge_faces.push_back({-1, -1});
      }
      int const e = it->second;
      int const sign = a < b ? 1 : -1;
      mesh.face_edges[f][i] = e;
      mesh.face_edge_signs[f][i] = sign;
      int & slot = mesh.edge_faces[e][sign > 0 ? 0 : 1];
      if (slot != -1)
        throw DegenerateMeshError("build_connectivity: edge traversed twice in the same "
                                  "direction (inconsistent orientation or non-manifold)");
      slot = f;
    }
  }
  for (auto const & ef : mesh.edge_faces)
    if (ef[0] < 0 || ef[1] < 0)
      throw DegenerateMeshError("build_connectivity: surface is not closed");
}

namespace
{

TriSurfaceMesh icosahedron()
{
  double const p = 0.5 * (1.0 + std::sqrt(5.0));
  TriSurfaceMesh m;
  m.vertices = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto & v : m.vertices)
    v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

void orient_outward(TriSurfaceMesh & m)
{
  for (int f = 0; f < m.num_faces(); ++f)
    if (m.face_normal(f).dot(m.face_centroid(f)) < 0.0)
      std::swap(m.faces[f][1], m.faces[f][2]);
}

} // namespace

TriSurfaceMesh icosphere(Ellipsoid const & surface, int level, double jitter, unsigned seed)
{
  if (level < 0 || level > 8)
    throw Error("icosphere: level must be in [0, 8]");
  if (jitter < 0.0 || jitter > 0.25)
    throw Error("icosphere: jitter must be in [0, 0.25]");
  TriSurfaceMesh m = icosahedron();
  orient_outward(m);
  if (jitter > 0.0) {
    // tangential displacement of the base vertices, a fraction of the base edge
    double const edge = (m.vertices[0] - m.vertices[1]).norm();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto & v : m.vertices) {
      Vec3 d(uni(rng), uni(rng), uni(rng));
      d -= d.dot(v) * v;
      v = (v + jitter * edge * d / std::max(1.0, d.norm())).normalized();
    }
  }
  for (auto & v : m.vertices)
    v = surface.from_sphere(v);

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto const key = std::minmax(a, b);
      auto it = midpoint.find({key.first, key.second});
      if (it != midpoint.end())
        return it->second;
      Vec3 const x = 0.5 * (m.vertices[a] + m.vertices[b]);
      m.vertices.push_back(surface.closest_point(x).point_on_gamma);
      int const id = m.num_vertices() - 1;
      midpoint.emplace(std::make_pair(key.first, key.second), id);
      return id;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(4 * m.faces.size());
    for (auto const & t : m.faces) {
      int const a = mid(t[0], t[1]);
      int const b = mid(t[1], t[2]);
      int const c = mid(t[2], t[0]);
      refined.push_back({t[0], a, c});
      refined.push_back({a, t[1], b});
      refined.push_back({c, b, t[2]});
      refined.push_back({a, b, c});
    }
    m.faces = std::move(refined);
  }
  build_connectivity(m);
  return m;
}

MeshMetrics metrics(TriSurfaceMesh const & mesh, Ellipsoid const & surface)
{
  MeshMetrics out;
  out.h_T.resize(mesh.faces.size());
  double hmin = std::numeric_limits<double>::infinity();
  double hmax = 0.0;
  out.min_transversality = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    double const area = mesh.face_area(f);
    if (!(area > 0.0)) {
      std::ostringstream msg;
      msg << "metrics: face " << f << " has zero area";
      throw DegenerateMeshError(msg.str());
    }
    double const diam = mesh.face_diameter(f);
    out.h_T[f] = std::sqrt(area);
    out.h = std::max(out.h, diam);
    out.sigma1 = std::max(out.sigma1, diam / out.h_T[f]);
    hmin = std::min(hmin, out.h_T[f]);
    hmax = std::max(hmax, out.h_T[f]);
    auto const ev = surface.closest_point(mesh.face_centroid(f));
    out.min_transversality = std::min(out.min_transversality, ev.nu.dot(mesh.face_normal(f)));
  }
  out.sigma2 = hmax / hmin;
  std::vector<int> valence(mesh.vertices.size(), 0);
  for (auto const & e : mesh.edges) {
    ++valence[e[0]];
    ++valence[e[1]];
  }
  out.valence_max = *std::max_element(valence.begin(), valence.end());
  return out;
}

std::vector<EdgeFrame> edge_frames(TriSurfaceMesh const & mesh)
{
  auto const & rule = gauss_rule(3);
  std::vector<EdgeFrame> frames(mesh.edges.size());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto & fr = frames[e];
    Vec3 const a = mesh.vertices[mesh.edges[e][0]];
    Vec3 const b = mesh.vertices[mesh.edges[e][1]];
    fr.length = (b - a).norm();
    fr.tangent = (b - a) / fr.length;
    fr.face_plus = mesh.edge_faces[e][0];
    fr.face_minus = mesh.edge_faces[e][1];
    Vec3 const mid = 0.5 * (a + b);
    auto conormal = [&](int f) {
      Vec3 n = fr.tangent.cross(mesh.face_normal(f)).normalized();
      if (n.dot(mid - mesh.face_centroid(f)) < 0.0)
        n = -n;
      return n;
    };
    fr.conormal_plus = conormal(fr.face_plus);
    fr.conormal_minus = conormal(fr.face_minus);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      fr.quad_points.push_back(a + rule.points[q] * (b - a));
      fr.quad_weights.push_back(rule.weights[q] * fr.length);
    }
  }
  return frames;
}

void write_off(TriSurfaceMesh const & mesh, std::filesystem::path const & path)
{
  std::ofstream out(path);
  if (!out)
    throw Error("write_off: cannot open " + path.string());
  out.precision(17);
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
  for (auto const & v : mesh.vertices)
    out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (auto const & t : mesh.faces)
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriSurfaceMesh read_off(std::filesystem::path const & path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("read_off: cannot open " + path.string());
  std::string header;
  in >> header;
  if (header != "OFF")
    throw Error("read_off: missing OFF header in " + path.string());
  int nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  TriSurfaceMesh m;
  m.vertices.resize(nv);
  for (auto & v : m.vertices)
    in >> v[0] >> v[1] >> v[2];
  m.faces.resize(nf);
  for (auto & t : m.faces) {
    int k = 0;
    in >> k;
    if (k != 3)
      throw Error("read_off: only triangular faces are supported");
    in >> t[0] >> t[1] >> t[2];
  }
  if (!in)
    throw Error("read_off: truncated file " + path.string());
  build_connectivity(m);
  return m;
}

} // namespace surfstokes
