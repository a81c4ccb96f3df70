#include "fourmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace fourmg {

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Vertex& p0 = vertices[tri[0]];
  const Vertex& p1 = vertices[tri[1]];
  const Vertex& p2 = vertices[tri[2]];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < n_triangles(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::h() const { return std::ldexp(1.0, -level); }

namespace {

// Segment of the L-shape outline containing a boundary point. Coordinates
// are dyadic rationals, so exact comparisons are safe.
int segment_of(double x, double y) {
  if (y == -1.0) return 0;
  if (x == 1.0) return 1;
  if (y == 0.0 && x >= 0.0) return 2;
  if (x == 0.0 && y >= 0.0) return 3;
  if (y == 1.0) return 4;
  if (x == -1.0) return 5;
  return -1;
}

std::int64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::int64_t>(b);
}

// Detect boundary edges by incidence count and tag them geometrically
// (used for the base mesh; refinement inherits parent tags).
void rebuild_boundary_from_incidence(Mesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      count[{a, b}]++;
    }
  }
  mesh.boundary_edges.clear();
  for (const auto& [edge, c] : count) {
    if (c == 1) {
      const Vertex& va = mesh.vertices[edge.first];
      const Vertex& vb = mesh.vertices[edge.second];
      int seg = segment_of(0.5 * (va.x + vb.x), 0.5 * (va.y + vb.y));
      mesh.boundary_edges.push_back({edge.first, edge.second, seg});
    }
  }
}

// Renumber vertices lexicographically by (y, x) and remap all index lists.
void sort_lexicographic(Mesh& mesh, TransferMap* transfer) {
  const int n = mesh.n_vertices();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const Vertex& a = mesh.vertices[i];
    const Vertex& b = mesh.vertices[j];
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  std::vector<int> new_id(n);
  for (int k = 0; k < n; ++k) new_id[order[k]] = k;

  std::vector<Vertex> verts(n);
  for (int old = 0; old < n; ++old) verts[new_id[old]] = mesh.vertices[old];
  mesh.vertices = std::move(verts);
  for (auto& tri : mesh.triangles)
    for (int& v : tri) v = new_id[v];
  for (auto& e : mesh.boundary_edges) {
    e.a = new_id[e.a];
    e.b = new_id[e.b];
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(mesh.boundary_edges.begin(), mesh.boundary_edges.end(),
            [](const BoundaryEdge& l, const BoundaryEdge& r) {
              return std::tie(l.a, l.b) < std::tie(r.a, r.b);
            });
  if (transfer) {
    std::vector<TransferEntry> entries(n);
    for (int old = 0; old < n; ++old)
      entries[new_id[old]] = transfer->fine_to_coarse[old];
    transfer->fine_to_coarse = std::move(entries);
  }
}

} // namespace

Mesh lshape_base_mesh() {
  Mesh mesh;
  mesh.level = 0;
  // Grid points of {-1,0,1}^2 minus the removed corner (1,1).
  for (double y : {-1.0, 0.0, 1.0})
    for (double x : {-1.0, 0.0, 1.0})
      if (!(x > 0.0 && y > 0.0)) mesh.vertices.push_back({x, y});

  auto vertex_id = [&](double x, double y) {
    for (int i = 0; i < mesh.n_vertices(); ++i)
      if (mesh.vertices[i].x == x && mesh.vertices[i].y == y) return i;
    throw std::logic_error("lshape_base_mesh: vertex lookup failed");
  };
  // The three unit squares, diagonal from lower-left to upper-right.
  const double squares[3][2] = {{-1.0, -1.0}, {0.0, -1.0}, {-1.0, 0.0}};
  for (const auto& sq : squares) {
    int ll = vertex_id(sq[0], sq[1]);
    int lr = vertex_id(sq[0] + 1.0, sq[1]);
    int ul = vertex_id(sq[0], sq[1] + 1.0);
    int ur = vertex_id(sq[0] + 1.0, sq[1] + 1.0);
    mesh.triangles.push_back({ll, lr, ur});
    mesh.triangles.push_back({ll, ur, ul});
  }
  rebuild_boundary_from_incidence(mesh);
  sort_lexicographic(mesh, nullptr);
  return mesh;
}

std::pair<Mesh, TransferMap> refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.level = mesh.level + 1;
  fine.vertices = mesh.vertices; // coarse twins keep their coordinates
  TransferMap transfer;
  transfer.fine_to_coarse.resize(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v)
    transfer.fine_to_coarse[v] = {v, -1, 1.0, 0.0};

  std::unordered_map<std::int64_t, int> midpoint;
  midpoint.reserve(3 * mesh.triangles.size());
  auto midpoint_id = [&](int a, int b) {
    auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vertex& va = mesh.vertices[a];
    const Vertex& vb = mesh.vertices[b];
    int id = fine.n_vertices();
    fine.vertices.push_back({0.5 * (va.x + vb.x), 0.5 * (va.y + vb.y)});
    transfer.fine_to_coarse.push_back({a, b, 0.5, 0.5});
    midpoint.emplace(key, id);
    return id;
  };

  fine.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    int v0 = tri[0], v1 = tri[1], v2 = tri[2];
    int m01 = midpoint_id(v0, v1);
    int m12 = midpoint_id(v1, v2);
    int m20 = midpoint_id(v2, v0);
    fine.triangles.push_back({v0, m01, m20});
    fine.triangles.push_back({m01, v1, m12});
    fine.triangles.push_back({m20, m12, v2});
    fine.triangles.push_back({m01, m12, m20});
  }

  fine.boundary_edges.reserve(2 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    int m = midpoint.at(edge_key(e.a, e.b));
    fine.boundary_edges.push_back({e.a, m, e.segment});
    fine.boundary_edges.push_back({m, e.b, e.segment});
  }

  sort_lexicographic(fine, &transfer);
  return {std::move(fine), std::move(transfer)};
}

Mesh build_lshape_mesh(int level) {
  if (level < 0) throw std::invalid_argument("build_lshape_mesh: level must be >= 0");
  Mesh mesh = lshape_base_mesh();
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh).first;
  return mesh;
}

DofMap classify_dofs(const Mesh& mesh, const BcSpec& bc) {
  std::vector<char> on_boundary(mesh.n_vertices(), 0);
  for (const auto& e : mesh.boundary_edges) {
    on_boundary[e.a] = 1;
    on_boundary[e.b] = 1;
  }
  auto on_open_neumann = [&](const Vertex& v) {
    return (v.x == 0.0 && v.y > 0.0 && v.y < 1.0) ||
           (v.y == 0.0 && v.x > 0.0 && v.x < 1.0);
  };
  DofMap dofs;
  dofs.index_of.assign(mesh.n_vertices(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    bool fixed = on_boundary[v];
    if (fixed && bc.kind == BcKind::MixedCorner && on_open_neumann(mesh.vertices[v]))
      fixed = false;
    if (fixed) {
      dofs.fixed.push_back(v);
    } else {
      dofs.index_of[v] = static_cast<int>(dofs.free.size());
      dofs.free.push_back(v);
    }
  }
  dofs.n_free = static_cast<int>(dofs.free.size());
  return dofs;
}

void validate_mesh(const Mesh& mesh) {
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    for (int v : mesh.triangles[t])
      if (v < 0 || v >= mesh.n_vertices())
        throw std::runtime_error("validate_mesh: vertex index out of range");
    if (mesh.triangle_area(t) <= 0.0)
      throw std::runtime_error("validate_mesh: nonpositive area in triangle " + std::to_string(t));
  }
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      count[{a, b}]++;
    }
  }
  std::map<std::pair<int, int>, int> listed;
  for (const auto& e : mesh.boundary_edges) {
    int a = e.a, b = e.b;
    if (a > b) std::swap(a, b);
    listed[{a, b}]++;
  }
  for (const auto& [edge, c] : count) {
    if (c > 2) throw std::runtime_error("validate_mesh: edge shared by more than 2 triangles");
    bool is_listed = listed.count(edge) > 0;
    if (c == 1 && !is_listed)
      throw std::runtime_error("validate_mesh: boundary edge missing from boundary list");
    if (c == 2 && is_listed)
      throw std::runtime_error("validate_mesh: interior edge listed as boundary");
  }
  if (listed.size() != static_cast<size_t>(std::count_if(
          count.begin(), count.end(), [](const auto& kv) { return kv.second == 1; })))
    throw std::runtime_error("validate_mesh: boundary edge count mismatch");
}

void dump_mesh_csv(const Mesh& mesh, const std::string& prefix) {
  {
    std::ofstream out(prefix + "vertices.csv");
    out << "id,x,y\n";
    for (int v = 0; v < mesh.n_vertices(); ++v)
      out << v << ',' << mesh.vertices[v].x << ',' << mesh.vertices[v].y << '\n';
  }
  {
    std::ofstream out(prefix + "triangles.csv");
    out << "id,v0,v1,v2,tag\n";
    for (int t = 0; t < mesh.n_triangles(); ++t)
      out << t << ',' << mesh.triangles[t][0] << ',' << mesh.triangles[t][1] << ','
          << mesh.triangles[t][2] << ",0\n";
  }
  {
    std::ofstream out(prefix + "boundary.csv");
    out << "v0,v1,segment\n";
    for (const auto& e : mesh.boundary_edges)
      out << e.a << ',' << e.b << ',' << e.segment << '\n';
  }
}

} // namespace fourmg
