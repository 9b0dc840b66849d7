#pragma once

#include <stdexcept>
#include <string>

namespace cubesphere {

// Malformed input or a violated precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructed complex failed validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer Smith normal form refused because the complex is too large.
class HomologyTooLarge : public std::runtime_error {
 public:
  HomologyTooLarge(std::size_t cells, std::size_t threshold)
      : std::runtime_error("complex has " + std::to_string(cells) +
                           " cells, above the integer SNF threshold of " +
                           std::to_string(threshold) + "; use field coefficients"),
        cells_(cells),
        threshold_(threshold) {}
  std::size_t cells() const { return cells_; }
  std::size_t threshold() const { return threshold_; }

 private:
  std::size_t cells_;
  std::size_t threshold_;
};

}  // namespace cubesphere
