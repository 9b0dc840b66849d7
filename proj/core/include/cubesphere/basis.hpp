#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubesphere/complex.hpp"
#include "cubesphere/surface.hpp"

namespace cubesphere {

// Transversal crossing of an edge of Q: close to one endpoint at a given depth, or at the middle.
struct Crossing {
  std::uint32_t edge = 0;
  VertexId near = kNone;  // kNone marks the middle of the edge
  std::uint32_t depth = 0;
  bool operator==(const Crossing&) const = default;
};

// Closed curve on the surface in general position with respect to the 1-skeleton.
struct SurfaceCurve {
  std::vector<Crossing> crossings;     // cyclic
  std::vector<std::uint32_t> squares;  // squares[k] carries the arc crossings[k] -> crossings[k+1]
};

// alpha_1, beta_1, alpha_2, beta_2, ... stored at indices 0, 1, 2, 3, ...
struct CurveBasis {
  std::size_t genus = 0;
  std::vector<SurfaceCurve> curves;
  std::vector<std::vector<int>> intersections;  // geometric; diagonal counts self-crossings
  std::vector<std::size_t> lengths() const;
};

CurveBasis canonical_basis(const CubeComplex& q);

// Geometric intersection counts of the arcs as drawn inside each square.
std::vector<std::vector<int>> curve_intersections(const CubeComplex& q, const std::vector<SurfaceCurve>& curves);

struct CrossingBound {
  std::size_t max = 0;
  std::size_t curve = 0;
  std::uint32_t edge = 0;
};
CrossingBound crossing_bound(const std::vector<SurfaceCurve>& curves);

// Closed edge paths, first vertex not repeated.
struct EdgePathBasis {
  std::vector<std::vector<VertexId>> curves;
  std::vector<std::size_t> lengths() const;
};

struct BasisCheck {
  bool pattern = false;
  bool unimodular = false;
  bool ok() const { return pattern && unimodular; }
  std::vector<std::vector<int>> intersections;
  std::vector<std::vector<long long>> coordinates;  // curve classes against an H_1 basis
  std::string detail;
};

BasisCheck verify_basis(const CubeComplex& c, const EdgePathBasis& b);
BasisCheck verify_curve_basis(const CubeComplex& q, const CurveBasis& b);

bool canonical_pattern(const std::vector<std::vector<int>>& m);

struct StepCensus {
  std::string step;
  FVector f;
};

struct Refinement {
  CubeComplex complex;
  EdgePathBasis basis;
  std::vector<std::vector<VertexId>> edge_chains;  // per edge of Q, from its smaller endpoint to its larger
  std::vector<StepCensus> census;
};

// Face counts of every refinement step without building the complex.
std::vector<StepCensus> refine_census(const CubeComplex& q, const CurveBasis& b);
Refinement refine_with_basis(const CubeComplex& q, const CurveBasis& b);

struct RegularNeighborhoodCert {
  std::size_t curve = 0;
  bool ok = false;
  std::vector<std::uint32_t> squares;  // two per curve edge: left then right
  std::optional<std::uint32_t> offending_square;
  std::string reason;
};

// Checks that the squares meeting the curve form curve x I_2 with the curve in the middle.
RegularNeighborhoodCert neighborhood_certificate(const CubeComplex& c, const std::vector<VertexId>& curve,
                                                 std::size_t index = 0);

struct Regularized {
  CubeComplex complex;
  EdgePathBasis basis;
  std::vector<RegularNeighborhoodCert> certs;
  std::vector<std::vector<VertexId>> edge_chains;
  std::size_t added_squares = 0;
};

Regularized regularize_neighborhoods(const Refinement& r);

}  // namespace cubesphere
