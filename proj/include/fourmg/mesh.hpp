#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace fourmg {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
};

/// Boundary edge (a,b) lying on one of the six straight segments of the
/// L-shaped outline. Segment tags: 0 y=-1, 1 x=1, 2 y=0 (x in [0,1]),
/// 3 x=0 (y in [0,1]), 4 y=1, 5 x=-1.
struct BoundaryEdge {
  int a = -1;
  int b = -1;
  int segment = -1;
};

/// Conforming triangulation. Triangles are counterclockwise vertex triples.
/// Vertices are ordered lexicographically by (y, x) so that sweeps over
/// vertex indices are reproducible.
struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  int level = 0; // refinement depth, h = 2^-level for the L-shape family

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  double total_area() const;
  double h() const; // 2^-level
};

/// Interpolation stencil of one fine vertex: either the coarse twin
/// (p1 < 0, w0 = 1) or the two endpoints of the bisected coarse edge
/// (w0 = w1 = 1/2).
struct TransferEntry {
  int p0 = -1;
  int p1 = -1;
  double w0 = 0.0;
  double w1 = 0.0;
};

struct TransferMap {
  std::vector<TransferEntry> fine_to_coarse; // indexed by fine vertex id
};

enum class BcKind { AllDirichlet, MixedCorner };

/// Boundary condition layout. MixedCorner imposes natural (Neumann)
/// conditions on the two interior segments x=0, y in (0,1) and y=0,
/// x in (0,1); everything else is Dirichlet. Vertices where the Neumann
/// closure meets the Dirichlet part are fixed.
struct BcSpec {
  BcKind kind = BcKind::AllDirichlet;
};

struct DofMap {
  std::vector<int> free;     // vertex ids carrying unknowns, ascending
  std::vector<int> fixed;    // vertex ids on the Dirichlet boundary
  std::vector<int> index_of; // vertex id -> free index, or -1 if fixed
  int n_free = 0;
};

/// Base triangulation of the L-shape (-1,1)^2 \ [0,1)^2: the three unit
/// squares, each split along the diagonal from lower-left to upper-right.
/// 8 vertices, 6 triangles.
Mesh lshape_base_mesh();

/// Level-l mesh obtained by l uniform refinements of the base mesh.
Mesh build_lshape_mesh(int level);

/// Split every triangle into 4 congruent children by edge midpoints and
/// return the refined mesh together with the vertex interpolation map.
std::pair<Mesh, TransferMap> refine_uniform(const Mesh& mesh);

DofMap classify_dofs(const Mesh& mesh, const BcSpec& bc);

/// Throws std::runtime_error when a mesh invariant is violated (negative
/// area, nonconforming edge, boundary list mismatch).
void validate_mesh(const Mesh& mesh);

/// Writes <prefix>vertices.csv, <prefix>triangles.csv and
/// <prefix>boundary.csv.
void dump_mesh_csv(const Mesh& mesh, const std::string& prefix);

} // namespace fourmg
