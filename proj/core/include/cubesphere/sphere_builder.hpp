#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubesphere/complex.hpp"
#include "cubesphere/fillball.hpp"

namespace cubesphere {

// Q′ over Q: the refined surface, the refinement of every Q-edge and the regularized basis.
struct SurfaceRefinement {
  CubeComplex q;
  CubeComplex qprime;
  std::vector<std::vector<VertexId>> edge_chains;  // per edge of Q, in Q′ ids
  std::vector<std::vector<VertexId>> alpha, beta;  // closed edge paths in Q′
};

SurfaceRefinement refine_surface(const CubeComplex& q);
// Q′ = Q with no curves: still refines every edge evenly, as needed for a refining cylinder.
SurfaceRefinement refine_surface_without_basis(const CubeComplex& q);

struct FillRequest {
  CubeComplex sphere;             // local ids
  std::vector<VertexId> to_global;
  std::string origin;             // "pillow" or "handlebody_end"
  std::size_t index = 0;          // Q square for pillows
  bool hypotheses_ok = false;     // valid, closed, genus 0, even
  std::string detail;
};

// Checks that a request is a valid even 2-sphere, as fill_ball requires.
bool check_fill_hypotheses(FillRequest& r);

struct BuildOptions {
  bool structural = false;           // skip fills entirely
  FillOptions fill{200, 16};         // per fill
};

struct StageCensus {
  std::string stage;
  std::size_t vertices = 0;  // vertices introduced by the stage, fill interiors excluded
  std::size_t squares = 0;   // squares built explicitly (side faces, disks, pillow tops)
  std::size_t cubes = 0;     // cubes built explicitly (products), fill cubes excluded
  std::size_t fill_cubes = 0;
  std::size_t fill_vertices = 0;
  std::size_t requests = 0;
  std::size_t request_squares = 0;
  bool operator==(const StageCensus&) const = default;
};

struct PipelineCensus {
  int n = 0;
  long long k = 0;
  int d = 3;
  FVector q;
  std::size_t cylinder_vertices = 0, cylinder_cubes = 0;
  std::vector<StageCensus> stages;  // refining_a, refining_b, handlebody_a, handlebody_b
  std::size_t predicted_vertices = 0;  // skeleton vertices from counts alone
  std::size_t measured_vertices = 0;   // skeleton vertices actually allocated
  std::size_t total_vertices = 0;      // including fill interiors when filled
  std::size_t facets = 0;              // cubes, including fills when filled
  double vertex_constant = 0;          // (total - (k+1) f0(Q)) / n^4
  std::size_t ten_applied = 0;
  bool full = false;
};

struct RefiningCylinder {
  std::vector<std::vector<VertexId>> cells;  // global ids
  CubeComplex complex;  // filled pillows, or the side faces and pillow squares when structural
  CubeComplex q2;       // Q″: Q′ with at most one 10-split per Q square, ids extend Q′
  std::vector<VertexId> q2_global;
  std::vector<FillRequest> requests;
  StageCensus census;
  std::size_t ten_applied = 0;
  bool filled = false;
};

// Cylinder M×[b,c] from Q (ids as given by q_global) to Q″ without its fills. `next` is the next free id.
RefiningCylinder refining_cylinder_skeleton(const SurfaceRefinement& r, const std::vector<VertexId>& q_global,
                                            VertexId& next);
RefiningCylinder refining_cylinder(const SurfaceRefinement& r, const BuildOptions& opt = {});

struct Handlebody {
  std::vector<std::vector<VertexId>> cells;  // global ids
  CubeComplex complex;
  CubeComplex sphere;  // Q′_sphere
  std::vector<FillRequest> requests;
  StageCensus census;
  bool filled = false;
};

// Handlebody bounded by Q″ (ids q2_global) with meridians `curves` (Q″ ids), without its fill.
Handlebody handlebody_skeleton(const CubeComplex& q2, const std::vector<VertexId>& q2_global,
                               const std::vector<std::vector<VertexId>>& curves, VertexId& next);

struct FillOutcome {
  std::vector<std::vector<VertexId>> cubes;  // global ids
  std::size_t vertices = 0;
  bool ok = false;
  std::string failure;
};

// Fills every request in order, stopping at the first failure. Pillow balls get each cube inset.
FillOutcome fill_requests(const std::vector<FillRequest>& requests, VertexId& next, const FillOptions& opt,
                          bool inset);
Handlebody handlebody(const CubeComplex& q2, const std::vector<std::vector<VertexId>>& curves,
                      const BuildOptions& opt = {});

struct SphereResult {
  std::optional<CubeComplex> complex;  // present on full success
  PipelineCensus census;
  std::vector<FillRequest> requests;
  std::string failure;  // first fill failure, empty on success
  CubeComplex skeleton; // everything built without fills
};

SphereResult sphere3(int n, long long k, const BuildOptions& opt = {});
// Same pipeline on a given surface (genus allowed to be 0) and refinement.
SphereResult sphere3_from(const SurfaceRefinement& r, int n, long long k, const BuildOptions& opt = {});

CubeComplex induct_dimension(const CubeComplex& s, std::size_t facet = 0);

struct SphereDResult {
  int d = 3;
  int n_param = 0;
  long long k = 0;
  std::size_t budget = 0;
  std::size_t vertices = 0;
  std::size_t facets = 0;
  bool within_budget = false;
  bool full = false;
  std::optional<CubeComplex> complex;
  PipelineCensus census;
  std::string note;
};

SphereDResult sphere_d(int d, std::size_t n, const BuildOptions& opt = {});

}  // namespace cubesphere
