#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cubesphere/complex.hpp"

namespace cubesphere {

// A cubulated 3-ball whose boundary is a given 2-sphere. The ball keeps the sphere's vertex ids;
// square_map pairs a sphere square index with the index of the same square among the ball's 2-cells.
struct FillCertificate {
  CubeComplex ball;
  std::vector<std::pair<std::size_t, std::size_t>> square_map;
  std::size_t steps = 0;  // search nodes expanded
};

struct FillStats {
  std::size_t expanded = 0;
  std::size_t frontier = 0;
  std::size_t smallest_boundary = 0;  // fewest boundary squares reached
  std::size_t cubes_at_smallest = 0;
};

// Bounded search ran out of budget. Carries statistics, never a partial certificate.
class FillFailed : public std::runtime_error {
 public:
  explicit FillFailed(FillStats s);
  const FillStats& stats() const { return stats_; }

 private:
  FillStats stats_;
};

struct FillOptions {
  std::size_t max_steps = 20000;
  std::size_t max_growth = 16;  // boundary may exceed the input by this many squares
};

FillCertificate fill_ball(const CubeComplex& sphere, FillOptions opt = {});

struct FillCheck {
  bool ok = false;
  std::string witness;
};

FillCheck verify_filling(const FillCertificate& cert, const CubeComplex& sphere);

// Ball in the interchange format followed by `bmap <sphere square> <ball square>` lines.
std::string serialize_certificate(const FillCertificate& cert);
FillCertificate parse_certificate(const std::string& text);

}  // namespace cubesphere
