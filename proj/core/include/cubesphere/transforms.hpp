#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cubesphere/complex.hpp"

namespace cubesphere {

CubeComplex cartesian_product(const CubeComplex& a, const CubeComplex& b);
CubeComplex interval_complex(int k);
CubeComplex cycle_complex(int k);
CubeComplex torus_complex(int d);
CubeComplex solid_cube(int d);
// Boundary of the (d+1)-cube, a d-sphere with 2^(d+1) vertices.
CubeComplex cube_sphere(int d);

enum class Gadget { InsertSquare5, InsetCube7, Square10 };
Gadget gadget_from_name(const std::string& name);

// Replaces a maximal square (or cube for InsetCube7) keeping its boundary.
CubeComplex apply_gadget(const CubeComplex& c, std::span<const VertexId> cell, Gadget g);
CubeComplex apply_gadget(const CubeComplex& c, int k, std::size_t index, Gadget g);

// Pieces used by generators: cyclic squares (a,b,c,d) and fresh vertex allocation.
void split_square5(const std::array<VertexId, 4>& cyc, VertexId& next, std::vector<std::vector<VertexId>>& out);
void split_square10(const std::array<VertexId, 4>& cyc, VertexId& next, std::vector<std::vector<VertexId>>& out);
void inset_cube7(std::span<const VertexId> cube, VertexId& next, std::vector<std::vector<VertexId>>& out);
// Every maximal square split in five.
CubeComplex split_all_squares5(const CubeComplex& c);

// Pairs (vertex of A, vertex of B).
using VertexMap = std::vector<std::pair<VertexId, VertexId>>;

struct GlueResult {
  CubeComplex complex;
  std::vector<VertexId> from_b;  // B vertex -> result vertex; A keeps its ids
};

GlueResult glue(const CubeComplex& a, const CubeComplex& b, const VertexMap& m, bool validate_result = true);
// Quotient identifying pairs of vertices of one complex.
CubeComplex identify(const CubeComplex& c, const std::vector<std::pair<VertexId, VertexId>>& pairs,
                     bool validate_result = true);

struct Subcomplex {
  CubeComplex complex;
  std::vector<VertexId> to_parent;
};

Subcomplex boundary_subcomplex(const CubeComplex& c);
CubeComplex boundary_complex(const CubeComplex& c);
CubeComplex remove_facet(const CubeComplex& c, std::size_t facet);
// Subcomplex spanned by the given maximal cells, vertices renumbered in increasing order.
Subcomplex subcomplex_of(const std::vector<std::vector<VertexId>>& cells, int dim);

struct EdgeCut {
  CubeComplex complex;
  std::vector<std::array<VertexId, 4>> cycles;      // oriented original squares
  std::vector<std::array<VertexId, 4>> new_cycles;  // same squares after cutting
  std::vector<VertexId> parent;                     // cut vertex -> original vertex
};

// Cuts a closed orientable surface along edges; each sector between cut edges gets its own vertex.
EdgeCut cut_along_edges(const CubeComplex& s, const std::vector<std::uint32_t>& edges);

struct CurveCut {
  CubeComplex complex;
  std::vector<VertexId> left;   // copy of the curve bordering the squares on its left
  std::vector<VertexId> right;
};

// Curve given as a closed vertex sequence (first vertex not repeated).
CurveCut cut_along_curve(const CubeComplex& s, const std::vector<VertexId>& curve);

enum class WarmupVariant { Fan, Literal };
CubeComplex warmup_complex(int m, int d, WarmupVariant variant = WarmupVariant::Fan);

}  // namespace cubesphere
