#include "cubesphere/complex.hpp"

#include <algorithm>
#include <numeric>

#include "cubesphere/error.hpp"

namespace cubesphere {

namespace {
constexpr std::uint32_t kEmpty = 0xffffffffu;
}

CellTable::CellTable(int k) : k_(k), stride_(corner_count(k)) { rehash(16); }

std::size_t CellTable::hash(std::span<const VertexId> c) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (VertexId v : c) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

void CellTable::rehash(std::size_t slots) {
  slots_.assign(slots, kEmpty);
  const std::size_t mask = slots - 1;
  for (std::size_t i = 0; i < size(); ++i) {
    std::size_t s = hash((*this)[i]) & mask;
    while (slots_[s] != kEmpty) s = (s + 1) & mask;
    slots_[s] = static_cast<std::uint32_t>(i);
  }
}

std::optional<std::size_t> CellTable::find(std::span<const VertexId> c) const {
  const std::size_t mask = slots_.size() - 1;
  std::size_t s = hash(c) & mask;
  while (slots_[s] != kEmpty) {
    auto cell = (*this)[slots_[s]];
    if (std::equal(cell.begin(), cell.end(), c.begin(), c.end())) return slots_[s];
    s = (s + 1) & mask;
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> CellTable::insert(std::span<const VertexId> c) {
  if (auto f = find(c)) return {*f, false};
  const std::size_t idx = size();
  data_.insert(data_.end(), c.begin(), c.end());
  if (2 * size() > slots_.size()) {
    rehash(slots_.size() * 2);
  } else {
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = hash(c) & mask;
    while (slots_[s] != kEmpty) s = (s + 1) & mask;
    slots_[s] = static_cast<std::uint32_t>(idx);
  }
  return {idx, true};
}

void CellTable::sort() {
  std::vector<std::uint32_t> order(size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    auto x = (*this)[a], y = (*this)[b];
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  std::vector<VertexId> sorted;
  sorted.reserve(data_.size());
  for (auto i : order) {
    auto c = (*this)[i];
    sorted.insert(sorted.end(), c.begin(), c.end());
  }
  data_.swap(sorted);
  rehash(slots_.size());
}

long long FVector::euler() const {
  long long e = 0;
  for (std::size_t k = 0; k < f.size(); ++k) e += (k % 2 ? -1 : 1) * static_cast<long long>(f[k]);
  return e;
}

std::string FVector::csv() const {
  std::string s;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(f[k]);
  }
  return s;
}

int CubeComplex::top_dim() const {
  for (int k = dim_; k >= 1; --k)
    if (count(k) > 0) return k;
  return n_vertices_ > 0 ? 0 : -1;
}

std::size_t CubeComplex::count(int k) const {
  if (k == 0) return n_vertices_;
  if (k < 0 || k > dim_) return 0;
  return tables_[k].size();
}

std::size_t CubeComplex::total_cells() const {
  std::size_t t = 0;
  for (int k = 0; k <= dim_; ++k) t += count(k);
  return t;
}

std::optional<std::size_t> CubeComplex::find(std::span<const VertexId> corners) const {
  const int k = cube_dim_from_corners(corners.size());
  if (k < 0 || k > dim_) return std::nullopt;
  if (k == 0) return corners[0] < n_vertices_ ? std::optional<std::size_t>(corners[0]) : std::nullopt;
  std::vector<VertexId> canon;
  canonicalize_into(corners, canon);
  return tables_[k].find(canon);
}

std::optional<std::size_t> CubeComplex::find_canonical(int k, std::span<const VertexId> canonical) const {
  if (k == 0) return canonical[0] < n_vertices_ ? std::optional<std::size_t>(canonical[0]) : std::nullopt;
  if (k < 0 || k > dim_) return std::nullopt;
  return tables_[k].find(canonical);
}

bool CubeComplex::is_maximal(int k, std::size_t i) const { return maximal_[k][i] != 0; }

FVector CubeComplex::fvector() const {
  FVector fv;
  for (int k = 0; k <= dim_; ++k) fv.f.push_back(count(k));
  return fv;
}

std::vector<std::pair<int, std::size_t>> CubeComplex::maximal_cells() const {
  std::vector<std::pair<int, std::size_t>> out;
  for (int k = dim_; k >= 0; --k)
    for (std::size_t i = 0; i < count(k); ++i)
      if (maximal_[k][i]) out.emplace_back(k, i);
  return out;
}

std::vector<std::vector<VertexId>> CubeComplex::top_cells() const {
  std::vector<std::vector<VertexId>> out;
  const int t = top_dim();
  if (t <= 0) return out;
  for (std::size_t i = 0; i < count(t); ++i) {
    auto c = cell(t, i);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

bool CubeComplex::operator==(const CubeComplex& o) const {
  if (dim_ != o.dim_ || n_vertices_ != o.n_vertices_) return false;
  for (int k = 1; k <= dim_; ++k) {
    if (count(k) != o.count(k)) return false;
    for (std::size_t i = 0; i < count(k); ++i) {
      auto a = cell(k, i), b = o.cell(k, i);
      if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) return false;
    }
  }
  return true;
}

CubeComplex build_complex(int dim, std::size_t n_vertices,
                          const std::vector<std::vector<VertexId>>& top_cubes) {
  if (dim < 0) throw PreconditionError("negative dimension");
  CubeComplex c;
  c.dim_ = dim;
  c.n_vertices_ = n_vertices;
  c.tables_.reserve(dim + 1);
  for (int k = 0; k <= dim; ++k) c.tables_.emplace_back(k);

  std::vector<VertexId> canon;
  for (const auto& q : top_cubes) {
    const int k = cube_dim_from_corners(q.size());
    if (k < 0) throw PreconditionError("corner array length " + std::to_string(q.size()) +
                                       " is not a power of two");
    if (k > dim) throw PreconditionError("cube of dimension " + std::to_string(k) +
                                         " exceeds complex dimension " + std::to_string(dim));
    std::vector<VertexId> sorted(q);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("repeated corner within one cube");
    if (!sorted.empty() && sorted.back() >= n_vertices)
      throw PreconditionError("vertex id " + std::to_string(sorted.back()) + " out of range");
    if (k == 0) continue;
    canonicalize_into(q, canon);
    c.tables_[k].insert(canon);
  }

  std::vector<VertexId> face;
  for (int k = dim; k >= 2; --k) {
    auto& t = c.tables_[k];
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (int axis = 0; axis < k; ++axis)
        for (int side = 0; side < 2; ++side) {
          face = cube_facet(t[i], axis, side);
          canonicalize_into(face, canon);
          c.tables_[k - 1].insert(canon);
        }
    }
  }
  for (int k = 1; k <= dim; ++k) c.tables_[k].sort();

  c.maximal_.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) c.maximal_[k].assign(c.count(k), 1);
  for (int k = 1; k <= dim; ++k) {
    auto& t = c.tables_[k];
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (k == 1) {
        c.maximal_[0][t[i][0]] = 0;
        c.maximal_[0][t[i][1]] = 0;
        continue;
      }
      for (int axis = 0; axis < k; ++axis)
        for (int side = 0; side < 2; ++side) {
          face = cube_facet(t[i], axis, side);
          canonicalize_into(face, canon);
          c.maximal_[k - 1][*c.tables_[k - 1].find(canon)] = 0;
        }
    }
  }
  return c;
}

CubeComplex build_complex(int dim, const std::vector<std::vector<VertexId>>& top_cubes) {
  std::size_t n = 0;
  for (const auto& q : top_cubes)
    for (VertexId v : q) n = std::max<std::size_t>(n, std::size_t(v) + 1);
  return build_complex(dim, n, top_cubes);
}

std::vector<std::vector<VertexId>> maximal_corner_arrays(const CubeComplex& c) {
  std::vector<std::vector<VertexId>> out;
  for (auto [k, i] : c.maximal_cells()) {
    if (k == 0) {
      out.push_back({static_cast<VertexId>(i)});
    } else {
      auto s = c.cell(k, i);
      out.emplace_back(s.begin(), s.end());
    }
  }
  return out;
}

}  // namespace cubesphere
