#include "cubesphere/homology.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "cubesphere/error.hpp"

namespace cubesphere {

namespace {

constexpr std::uint32_t kPrimeA = 2147483647u;  // 2^31 - 1
constexpr std::uint32_t kPrimeB = 2147483629u;

long long checked(__int128 x) {
  if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("integer elimination overflow");
  return static_cast<long long>(x);
}

struct Entry {
  std::uint32_t col;
  long long val;
};
using Row = std::vector<Entry>;

class Eliminator {
 public:
  Eliminator(const BoundaryMatrix& m, Coefficients coeff)
      : integer_(coeff.kind == Coefficients::Kind::Integer), p_(coeff.p), rows_(m.rows), col_rows_(m.cols) {
    for (std::uint32_t c = 0; c < m.cols; ++c) {
      const auto& col = m.columns[c];
      for (std::size_t t = 0; t < col.rows.size(); ++t) {
        long long v = reduce(col.values[t]);
        if (v == 0) continue;
        rows_[col.rows[t]].push_back({c, v});
        col_rows_[c].push_back(col.rows[t]);
      }
    }
    for (auto& r : rows_)
      std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  }

  RankResult run() {
    RankResult res;
    const std::size_t nc = col_rows_.size();
    std::vector<char> alive(rows_.size(), 1), done(nc, 0);
    using Item = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::uint32_t c = 0; c < nc; ++c) pq.push({col_rows_[c].size(), c});
    std::vector<std::uint32_t> deferred, live;
    while (!pq.empty()) {
      auto [est, c] = pq.top();
      pq.pop();
      if (done[c]) continue;
      live.clear();
      for (auto r : col_rows_[c])
        if (alive[r] && value(r, c) != 0) live.push_back(r);
      std::sort(live.begin(), live.end());
      live.erase(std::unique(live.begin(), live.end()), live.end());
      col_rows_[c] = live;
      if (live.size() != est) {
        pq.push({live.size(), c});
        continue;
      }
      done[c] = 1;
      if (live.empty()) continue;
      std::uint32_t piv = UINT32_MAX;
      for (auto r : live) {
        long long v = value(r, c);
        if (integer_ && v != 1 && v != -1) continue;
        if (piv == UINT32_MAX || rows_[r].size() < rows_[piv].size()) piv = r;
      }
      if (piv == UINT32_MAX) {
        deferred.push_back(c);
        continue;
      }
      const long long pv = value(piv, c);
      for (auto r : live) {
        if (r == piv) continue;
        long long factor = integer_ ? checked(-static_cast<__int128>(value(r, c)) * pv)
                                    : mulmod(p_ - value(r, c), inverse(pv));
        axpy(r, factor, piv, pq, done);
      }
      alive[piv] = 0;
      rows_[piv].clear();
      ++res.rank;
    }
    if (!deferred.empty()) residual(deferred, alive, res);
    return res;
  }

 private:
  long long reduce(long long v) const {
    if (integer_) return v;
    long long r = v % static_cast<long long>(p_);
    return r < 0 ? r + p_ : r;
  }
  long long mulmod(long long a, long long b) const {
    return static_cast<long long>(static_cast<unsigned __int128>(a) * b % p_);
  }
  long long inverse(long long a) const {
    long long result = 1, base = a, e = static_cast<long long>(p_) - 2;
    while (e) {
      if (e & 1) result = mulmod(result, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    return result;
  }
  long long value(std::uint32_t r, std::uint32_t c) const {
    const Row& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::uint32_t x) { return e.col < x; });
    return it != row.end() && it->col == c ? it->val : 0;
  }

  template <class PQ>
  void axpy(std::uint32_t r, long long factor, std::uint32_t piv, PQ& pq, const std::vector<char>& done) {
    const Row& a = rows_[r];
    const Row& b = rows_[piv];
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
        out.push_back(a[i++]);
      } else {
        long long add = integer_ ? checked(static_cast<__int128>(factor) * b[j].val) : mulmod(factor, b[j].val);
        if (i < a.size() && a[i].col == b[j].col) {
          long long v = integer_ ? checked(static_cast<__int128>(a[i].val) + add) : (a[i].val + add) % p_;
          if (v != 0) out.push_back({a[i].col, v});
          ++i;
        } else {
          out.push_back({b[j].col, add});
          if (!done[b[j].col]) {
            col_rows_[b[j].col].push_back(r);
            pq.push({col_rows_[b[j].col].size(), b[j].col});
          }
        }
        ++j;
      }
    }
    rows_[r].swap(out);
  }

  void residual(const std::vector<std::uint32_t>& cols, const std::vector<char>& alive, RankResult& res) {
    std::vector<std::uint32_t> rlist;
    for (std::uint32_t r = 0; r < rows_.size(); ++r)
      if (alive[r] && !rows_[r].empty()) rlist.push_back(r);
    const std::size_t m = rlist.size(), n = cols.size();
    if (m * n > 50'000'000) throw std::runtime_error("residual matrix too large for dense reduction");
    std::vector<long long> a(m * n, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] = value(rlist[i], cols[j]);
    auto at = [&](std::size_t i, std::size_t j) -> long long& { return a[i * n + j]; };
    std::vector<long long> diag;
    std::size_t t = 0;
    while (t < m && t < n) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (at(i, j) != 0 && (bi == m || std::llabs(at(i, j)) < std::llabs(at(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == m) break;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(t, j), at(bi, j));
      for (std::size_t i = 0; i < m; ++i) std::swap(at(i, t), at(i, bj));
      bool clean = true;
      const long long pv = at(t, t);
      for (std::size_t i = t + 1; i < m; ++i) {
        long long q = at(i, t) / pv;
        if (q)
          for (std::size_t j = t; j < n; ++j) at(i, j) = checked(at(i, j) - static_cast<__int128>(q) * at(t, j));
        if (at(i, t)) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        long long q = at(t, j) / pv;
        if (q)
          for (std::size_t i = t; i < m; ++i) at(i, j) = checked(at(i, j) - static_cast<__int128>(q) * at(i, t));
        if (at(t, j)) clean = false;
      }
      if (!clean) continue;
      diag.push_back(std::llabs(pv));
      ++t;
    }
    res.rank += diag.size();
    // Normalize the diagonal into a divisibility chain.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
          long long g = std::gcd(diag[i], diag[j]);
          long long l = checked(static_cast<__int128>(diag[i] / g) * diag[j]);
          if (diag[i] != g || diag[j] != l) {
            if (diag[i] == g) continue;
            diag[i] = g;
            diag[j] = l;
            changed = true;
          }
        }
    }
    for (long long d : diag)
      if (d > 1) res.torsion.push_back(d);
    std::sort(res.torsion.begin(), res.torsion.end());
  }

  bool integer_;
  std::uint32_t p_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
};

}  // namespace

std::string Coefficients::name() const {
  switch (kind) {
    case Kind::Integer: return "Z";
    case Kind::Rational: return "Q";
    case Kind::Prime: return "F" + std::to_string(p);
  }
  return "?";
}

int facet_incidence(std::span<const VertexId> q, int axis, int side) {
  auto face = cube_facet(q, axis, side);
  int s = 1;
  if (face.size() > 1) s = canonicalize(face).sign;
  return (axis % 2 ? -1 : 1) * (side ? 1 : -1) * s;
}

BoundaryMatrix boundary_matrix(const CubeComplex& c, int k) {
  if (k < 1 || k > c.dim()) throw PreconditionError("boundary dimension out of range");
  BoundaryMatrix m;
  m.k = k;
  m.rows = c.count(k - 1);
  m.cols = c.count(k);
  m.columns.resize(m.cols);
  std::vector<VertexId> canon;
  for (std::size_t i = 0; i < m.cols; ++i) {
    auto q = c.cell(k, i);
    auto& col = m.columns[i];
    for (int axis = 0; axis < k; ++axis)
      for (int side = 0; side < 2; ++side) {
        auto face = cube_facet(q, axis, side);
        int s = 1;
        std::uint32_t row;
        if (k == 1) {
          row = face[0];
        } else {
          canonicalize_into(face, canon, &s);
          row = static_cast<std::uint32_t>(*c.find_canonical(k - 1, canon));
        }
        col.rows.push_back(row);
        col.values.push_back((axis % 2 ? -1 : 1) * (side ? 1 : -1) * s);
      }
  }
  return m;
}

bool boundary_squares_to_zero(const CubeComplex& c, int k) {
  if (k < 2) return true;
  auto hi = boundary_matrix(c, k);
  auto lo = boundary_matrix(c, k - 1);
  for (const auto& col : hi.columns) {
    std::vector<std::pair<std::uint32_t, long long>> acc;
    for (std::size_t t = 0; t < col.rows.size(); ++t) {
      const auto& mid = lo.columns[col.rows[t]];
      for (std::size_t u = 0; u < mid.rows.size(); ++u)
        acc.emplace_back(mid.rows[u], static_cast<long long>(col.values[t]) * mid.values[u]);
    }
    std::sort(acc.begin(), acc.end());
    for (std::size_t i = 0; i < acc.size();) {
      long long sum = 0;
      std::size_t j = i;
      while (j < acc.size() && acc[j].first == acc[i].first) sum += acc[j++].second;
      if (sum != 0) return false;
      i = j;
    }
  }
  return true;
}

RankResult matrix_rank(const BoundaryMatrix& m, Coefficients coeff) {
  if (coeff.kind == Coefficients::Kind::Rational) {
    // Rank over Q is at least the rank modulo any prime; two primes guard against an unlucky one.
    auto a = Eliminator(m, Coefficients::mod(kPrimeA)).run();
    auto b = Eliminator(m, Coefficients::mod(kPrimeB)).run();
    return a.rank >= b.rank ? a : b;
  }
  if (coeff.kind == Coefficients::Kind::Prime && coeff.p < 2)
    throw PreconditionError("modulus must be a prime");
  return Eliminator(m, coeff).run();
}

HomologyProfile betti_numbers(const CubeComplex& c, Coefficients coeff, HomologyOptions opt) {
  if (coeff.kind == Coefficients::Kind::Integer && c.total_cells() > opt.snf_cell_limit)
    throw HomologyTooLarge(c.total_cells(), opt.snf_cell_limit);
  const int d = c.dim();
  std::vector<RankResult> ranks(d + 2);
  for (int k = 1; k <= d; ++k) ranks[k] = matrix_rank(boundary_matrix(c, k), coeff);
  HomologyProfile h;
  h.coeff = coeff;
  h.torsion.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    h.betti.push_back(static_cast<long long>(c.count(k)) - static_cast<long long>(ranks[k].rank) -
                      static_cast<long long>(ranks[k + 1].rank));
    h.torsion[k] = ranks[k + 1].torsion;
  }
  h.euler = c.fvector().euler();
  return h;
}

std::string HomologyProfile::csv(const FVector& f) const {
  std::string s = std::to_string(static_cast<int>(f.f.size()) - 1);
  for (auto x : f.f) s += "," + std::to_string(x);
  for (auto b : betti) s += "," + std::to_string(b);
  std::string tor;
  for (std::size_t k = 0; k < torsion.size(); ++k)
    for (auto t : torsion[k]) tor += (tor.empty() ? "" : " ") + std::string("H") + std::to_string(k) + ":" + std::to_string(t);
  s += "," + (tor.empty() ? std::string("none") : tor);
  return s;
}

bool homology_sphere_check(const CubeComplex& c, int d, HomologyOptions opt) {
  if (c.top_dim() != d) return false;
  auto expected = [&](const HomologyProfile& h) {
    for (int k = 0; k <= d; ++k) {
      long long want = (k == 0 || k == d) ? 1 : 0;
      if (h.betti[k] != want) return false;
      if (!h.torsion[k].empty()) return false;
    }
    return true;
  };
  if (c.total_cells() <= opt.snf_cell_limit) return expected(betti_numbers(c, Coefficients::integers(), opt));
  return expected(betti_numbers(c, Coefficients::rationals(), opt)) &&
         expected(betti_numbers(c, Coefficients::mod(2), opt));
}

bool h1_trivial(const CubeComplex& c, HomologyOptions opt) {
  if (c.dim() < 1 || c.count(1) == 0) return true;
  if (c.total_cells() > opt.snf_cell_limit) throw HomologyTooLarge(c.total_cells(), opt.snf_cell_limit);
  auto r1 = matrix_rank(boundary_matrix(c, 1), Coefficients::integers());
  RankResult r2;
  if (c.dim() >= 2) r2 = matrix_rank(boundary_matrix(c, 2), Coefficients::integers());
  long long b1 = static_cast<long long>(c.count(1)) - static_cast<long long>(r1.rank) - static_cast<long long>(r2.rank);
  return b1 == 0 && r2.torsion.empty();
}

}  // namespace cubesphere
