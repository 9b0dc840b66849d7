#include "cubesphere/fillball.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "cubesphere/error.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/io.hpp"
#include "cubesphere/transforms.hpp"

namespace cubesphere {

FillFailed::FillFailed(FillStats s)
    : std::runtime_error("FILL_FAILED: expanded " + std::to_string(s.expanded) + " states, frontier " +
                         std::to_string(s.frontier) + ", smallest boundary " +
                         std::to_string(s.smallest_boundary) + " squares"),
      stats_(s) {}

namespace {

using Cycle = std::array<VertexId, 4>;
using Key = std::array<VertexId, 4>;
using Cube = std::array<VertexId, 8>;
using Edge = std::pair<VertexId, VertexId>;

Key key_of(const Cycle& c) {
  Key k = c;
  std::sort(k.begin(), k.end());
  return k;
}

Edge edge_of(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Face of the cube fixing `axis` to `side`, as a boundary cycle.
Cycle cube_face(const Cube& c, int axis, int side) {
  int j = axis == 0 ? 1 : 0, k = axis == 2 ? 1 : 2;
  unsigned base = side ? 1u << axis : 0u;
  return {c[base], c[base | 1u << j], c[base | 1u << j | 1u << k], c[base | 1u << k]};
}

constexpr std::array<std::pair<int, int>, 12> kCubeEdges = {
    {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3}, {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}};

// Positions (corner indices) form a face of a cube of the given dimension.
bool positions_form_face(const std::vector<int>& pos) {
  unsigned all = ~0u, any = 0;
  for (int p : pos) {
    all &= static_cast<unsigned>(p);
    any |= static_cast<unsigned>(p);
  }
  return pos.size() == (std::size_t{1} << std::popcount(all ^ any));
}

// Same square when the vertex sets agree and so do the diagonals. Corners are in bitmask order.
bool same_square(const std::array<VertexId, 4>& x, const std::array<VertexId, 4>& y) {
  auto diag = [](const std::array<VertexId, 4>& q) {
    auto d1 = edge_of(q[0], q[3]), d2 = edge_of(q[1], q[2]);
    return d1 < d2 ? std::pair{d1, d2} : std::pair{d2, d1};
  };
  return diag(x) == diag(y);
}

std::array<VertexId, 4> sub_square(std::span<const VertexId> cell, std::vector<int> pos) {
  std::sort(pos.begin(), pos.end());
  return {cell[pos[0]], cell[pos[1]], cell[pos[2]], cell[pos[3]]};
}

// Cells of the partial ball as bitmask-ordered corner arrays.
struct Ball {
  std::map<Key, int> squares;            // multiplicity over the sphere plus cube faces
  std::map<Key, std::vector<VertexId>> square_corners;
  std::set<Edge> edges;
  std::vector<Cube> cubes;
  std::map<Key, Cycle> front;            // squares with odd multiplicity
  std::unordered_map<VertexId, std::vector<Key>> by_vertex;
  std::set<VertexId> front_vertices;
  std::set<Edge> front_edges;
};

void add_square(Ball& b, const Cycle& c) {
  auto k = key_of(c);
  if (b.squares[k]++ == 0) {
    b.square_corners[k] = quad(c[0], c[1], c[2], c[3]);
    for (auto v : c) b.by_vertex[v].push_back(k);
    for (int t = 0; t < 4; ++t) b.edges.insert(edge_of(c[t], c[(t + 1) % 4]));
  }
  if (b.front.count(k)) b.front.erase(k);
  else b.front[k] = c;
}

void add_cube(Ball& b, const Cube& c) {
  b.cubes.push_back(c);
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) add_square(b, cube_face(c, axis, side));
}

struct Node {
  std::int64_t parent;
  Cube cube;
  VertexId next_vertex;
  std::size_t depth;
};

// Link of every front vertex among `touch` is one cycle; the front is connected with Euler characteristic 2.
bool front_is_sphere(const std::map<Key, Cycle>& front, const std::vector<VertexId>& touch) {
  for (auto v : touch) {
    std::map<VertexId, std::vector<VertexId>> link;
    for (const auto& [k, c] : front)
      for (int t = 0; t < 4; ++t)
        if (c[t] == v) {
          auto p = c[(t + 1) % 4], r = c[(t + 3) % 4];
          link[p].push_back(r);
          link[r].push_back(p);
        }
    if (link.empty()) continue;
    for (auto& [u, n] : link)
      if (n.size() != 2) return false;
    std::size_t seen = 1;
    VertexId start = link.begin()->first, prev = start, cur = link.begin()->second[0];
    while (cur != start) {
      auto& n = link[cur];
      auto nx = n[0] == prev ? n[1] : n[0];
      prev = cur;
      cur = nx;
      if (++seen > link.size()) return false;
    }
    if (seen != link.size()) return false;
  }
  std::set<VertexId> verts;
  std::map<Edge, std::vector<Key>> edge_sq;
  for (const auto& [k, c] : front) {
    verts.insert(c.begin(), c.end());
    for (int t = 0; t < 4; ++t) edge_sq[edge_of(c[t], c[(t + 1) % 4])].push_back(k);
  }
  long long chi = static_cast<long long>(verts.size()) - static_cast<long long>(edge_sq.size()) +
                  static_cast<long long>(front.size());
  if (chi != 2) return false;
  std::set<Key> seen{front.begin()->first};
  std::vector<Key> stack{front.begin()->first};
  while (!stack.empty()) {
    auto k = stack.back();
    stack.pop_back();
    const auto& c = front.at(k);
    for (int t = 0; t < 4; ++t)
      for (const auto& o : edge_sq[edge_of(c[t], c[(t + 1) % 4])])
        if (seen.insert(o).second) stack.push_back(o);
  }
  return seen.size() == front.size();
}

// The new cube meets every existing cell in a common face, and only touches the front.
bool cube_fits(const Ball& b, const Cube& c, VertexId first_new) {
  std::set<VertexId> distinct(c.begin(), c.end());
  if (distinct.size() != 8) return false;
  std::map<VertexId, int> pos;
  for (int i = 0; i < 8; ++i) {
    pos[c[i]] = i;
    if (c[i] < first_new && !b.front_vertices.count(c[i])) return false;
  }
  for (auto [i, j] : kCubeEdges) {
    auto e = edge_of(c[i], c[j]);
    if (b.edges.count(e) && !b.front_edges.count(e)) return false;
  }
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      auto k = key_of(cube_face(c, axis, side));
      auto it = b.squares.find(k);
      if (it != b.squares.end() && !b.front.count(k)) return false;
    }
  // Pairs of cube vertices that are not cube edges must not be ball edges.
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      if (std::popcount(static_cast<unsigned>(i ^ j)) > 1 && b.edges.count(edge_of(c[i], c[j]))) return false;
  std::set<Key> checked;
  auto meets_in_face = [&](std::span<const VertexId> cell) {
    std::vector<int> in_cell, in_cube;
    for (std::size_t i = 0; i < cell.size(); ++i)
      if (auto it = pos.find(cell[i]); it != pos.end()) {
        in_cell.push_back(static_cast<int>(i));
        in_cube.push_back(it->second);
      }
    if (in_cell.size() <= 1) return true;
    if (!positions_form_face(in_cell) || !positions_form_face(in_cube)) return false;
    if (in_cell.size() == 8) return false;
    return in_cell.size() == 2 || same_square(sub_square(cell, in_cell), sub_square(c, in_cube));
  };
  for (auto v : c) {
    auto it = b.by_vertex.find(v);
    if (it == b.by_vertex.end()) continue;
    for (const auto& k : it->second)
      if (checked.insert(k).second && !meets_in_face(b.square_corners.at(k))) return false;
  }
  for (const auto& cube : b.cubes)
    if (!meets_in_face(cube)) return false;
  return true;
}

// Candidate cubes in search order: corners (reusing a front vertex first), then edges, then squares.
std::vector<std::pair<Cube, VertexId>> candidate_cubes(const Ball& b, VertexId next) {
  std::vector<std::pair<Cube, VertexId>> out;
  std::map<VertexId, std::vector<Cycle>> around;
  std::map<VertexId, std::set<VertexId>> nbr;
  for (const auto& [k, q] : b.front)
    for (int t = 0; t < 4; ++t) {
      Cycle r{q[t], q[(t + 1) % 4], q[(t + 2) % 4], q[(t + 3) % 4]};
      around[q[t]].push_back(r);
      nbr[q[t]].insert(r[1]);
      nbr[q[t]].insert(r[3]);
    }
  for (const auto& [v, qs] : around) {
    if (qs.size() != 3 || nbr[v].size() != 3) continue;
    std::vector<VertexId> n(nbr[v].begin(), nbr[v].end());
    auto diag = [&](VertexId x, VertexId y) -> std::optional<VertexId> {
      for (const auto& r : qs)
        if ((r[1] == x && r[3] == y) || (r[1] == y && r[3] == x)) return r[2];
      return std::nullopt;
    };
    auto d12 = diag(n[0], n[1]), d13 = diag(n[0], n[2]), d23 = diag(n[1], n[2]);
    if (!d12 || !d13 || !d23) continue;
    Cube c{v, n[0], n[1], *d12, n[2], *d13, *d23, 0};
    std::set<VertexId> ws;
    for (auto d : {*d12, *d13, *d23})
      for (auto u : nbr[d])
        if (std::find(c.begin(), c.begin() + 7, u) == c.begin() + 7) ws.insert(u);
    for (auto w : ws) {
      c[7] = w;
      out.emplace_back(c, next);
    }
    c[7] = next;
    out.emplace_back(c, next + 1);
  }
  std::map<Edge, std::vector<Cycle>> by_edge;
  for (const auto& [v, qs] : around)
    for (const auto& r : qs)
      if (r[0] < r[1]) by_edge[{r[0], r[1]}].push_back(r);
      else by_edge[{r[1], r[0]}].push_back({r[1], r[0], r[3], r[2]});
  for (const auto& [e, qs] : by_edge) {
    if (qs.size() != 2) continue;
    // Each entry is (a, b, c, d) with b~c and a~d, up to the direction of travel.
    auto norm = [&](Cycle r) {
      if (r[1] != e.second) r = {r[0], r[3], r[2], r[1]};
      return r;
    };
    auto p = norm(qs[0]), q = norm(qs[1]);
    Cube c{e.first, e.second, p[3], p[2], q[3], q[2], next, next + 1};
    out.emplace_back(c, next + 2);
  }
  for (const auto& [k, q] : b.front) {
    Cube c{q[0], q[1], q[3], q[2], next, next + 1, next + 3, next + 2};
    out.emplace_back(c, next + 4);
  }
  return out;
}

// Fresh vertices are hashed by their front degree only, so relabelled copies of a state collide.
std::uint64_t front_hash(const std::map<Key, Cycle>& front, VertexId first_new) {
  std::unordered_map<VertexId, VertexId> degree;
  for (const auto& [k, c] : front)
    for (auto v : c)
      if (v >= first_new) ++degree[v];
  std::vector<Key> keys;
  keys.reserve(front.size());
  for (const auto& [k, c] : front) {
    Key m = k;
    for (auto& v : m)
      if (v >= first_new) v = first_new + degree[v];
    std::sort(m.begin(), m.end());
    keys.push_back(m);
  }
  std::sort(keys.begin(), keys.end());
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& k : keys)
    for (auto v : k) {
      h ^= v + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
  return h;
}

Ball replay(const CubeComplex& sphere, const std::vector<Node>& nodes, std::int64_t at) {
  Ball b;
  for (std::size_t i = 0; i < sphere.count(2); ++i) {
    auto s = sphere.cell(2, i);
    add_square(b, {s[0], s[1], s[3], s[2]});
  }
  std::vector<Cube> chain;
  for (auto i = at; i > 0; i = nodes[i].parent) chain.push_back(nodes[i].cube);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) add_cube(b, *it);
  for (const auto& [k, q] : b.front) {
    b.front_vertices.insert(q.begin(), q.end());
    for (int t = 0; t < 4; ++t) b.front_edges.insert(edge_of(q[t], q[(t + 1) % 4]));
  }
  return b;
}

}  // namespace

FillCertificate fill_ball(const CubeComplex& sphere, FillOptions opt) {
  if (sphere.top_dim() != 2) throw PreconditionError("fill_ball needs a 2-dimensional sphere");
  if (!validate(sphere).is_complex) throw PreconditionError("fill_ball input is not a valid cube complex");
  auto inv = surface_invariants(sphere);
  if (!inv.closed || !inv.orientable || inv.components != 1 || inv.genus != 0)
    throw PreconditionError("fill_ball input is not a 2-sphere (genus " + std::to_string(inv.genus) + ")");
  if (sphere.count(2) % 2) throw PreconditionError("fill_ball input has an odd number of squares");

  const std::size_t limit = sphere.count(2) + opt.max_growth;
  std::vector<Node> nodes{{-1, {}, static_cast<VertexId>(sphere.n_vertices()), 0}};
  // Fewest front squares first, then fewest cubes, then oldest.
  using Entry = std::tuple<std::size_t, std::int64_t, std::int64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.emplace(sphere.count(2), 0, 0);
  std::unordered_set<std::uint64_t> seen;
  const auto first_new = static_cast<VertexId>(sphere.n_vertices());
  FillStats stats;
  stats.smallest_boundary = sphere.count(2);

  while (!open.empty() && stats.expanded < opt.max_steps) {
    auto [size, depth_key, at] = open.top();
    open.pop();
    ++stats.expanded;
    Ball b = replay(sphere, nodes, at);
    const VertexId next = nodes[at].next_vertex;
    for (const auto& [cube, after] : candidate_cubes(b, next)) {
      if (!cube_fits(b, cube, next)) continue;
      auto front = b.front;
      for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
          auto f = cube_face(cube, axis, side);
          auto k = key_of(f);
          if (front.count(k)) front.erase(k);
          else front[k] = f;
        }
      if (front.size() > limit) continue;
      if (front.empty()) {
        std::vector<std::vector<VertexId>> cells;
        for (const auto& c : b.cubes) cells.emplace_back(c.begin(), c.end());
        cells.emplace_back(cube.begin(), cube.end());
        FillCertificate cert;
        cert.ball = build_complex(3, after, cells);
        for (std::size_t i = 0; i < sphere.count(2); ++i)
          if (auto j = cert.ball.find_canonical(2, sphere.cell(2, i))) cert.square_map.emplace_back(i, *j);
        cert.steps = stats.expanded;
        if (verify_filling(cert, sphere).ok) return cert;
        continue;
      }
      if (!front_is_sphere(front, std::vector<VertexId>(cube.begin(), cube.end()))) continue;
      if (!seen.insert(front_hash(front, first_new)).second) continue;
      auto depth = nodes[at].depth + 1;
      nodes.push_back({at, cube, after, depth});
      open.emplace(front.size(), static_cast<std::int64_t>(depth), static_cast<std::int64_t>(nodes.size() - 1));
      if (front.size() < stats.smallest_boundary) {
        stats.smallest_boundary = front.size();
        stats.cubes_at_smallest = depth;
      }
    }
  }
  stats.frontier = open.size();
  throw FillFailed(stats);
}

FillCheck verify_filling(const FillCertificate& cert, const CubeComplex& sphere) {
  const auto& ball = cert.ball;
  if (ball.dim() != 3 || ball.top_dim() != 3) return {false, "ball is not 3-dimensional"};
  for (auto [k, i] : ball.maximal_cells())
    if (k != 3) return {false, "ball has a maximal " + std::to_string(k) + "-cell"};
  auto report = validate(ball);
  if (!report.is_complex) return {false, "ball fails validation"};
  if (sphere.n_vertices() > ball.n_vertices()) return {false, "ball lacks sphere vertices"};

  std::vector<int> cover(ball.count(2), 0);
  for (std::size_t i = 0; i < ball.count(3); ++i) {
    auto c = ball.cell(3, i);
    for (int axis = 0; axis < 3; ++axis)
      for (int side = 0; side < 2; ++side) ++cover[*ball.find(cube_facet(c, axis, side))];
  }
  std::vector<char> hit_sphere(sphere.count(2), 0), hit_ball(ball.count(2), 0);
  for (auto [i, j] : cert.square_map) {
    if (i >= sphere.count(2) || j >= ball.count(2)) return {false, "square map index out of range"};
    if (hit_sphere[i]++ || hit_ball[j]++) return {false, "square map is not injective at sphere square " + std::to_string(i)};
    auto s = sphere.cell(2, i);
    auto q = ball.cell(2, j);
    if (!std::equal(s.begin(), s.end(), q.begin(), q.end()))
      return {false, "sphere square " + std::to_string(i) + " maps to a different ball square"};
    if (cover[j] != 1) return {false, "sphere square " + std::to_string(i) + " is not on the ball boundary"};
  }
  for (std::size_t i = 0; i < sphere.count(2); ++i)
    if (!hit_sphere[i]) return {false, "unmatched sphere square " + std::to_string(i)};
  for (std::size_t j = 0; j < ball.count(2); ++j)
    if (cover[j] == 1 && !hit_ball[j]) return {false, "unmatched ball boundary square " + std::to_string(j)};
    else if (cover[j] > 2) return {false, "ball square " + std::to_string(j) + " lies in more than two cubes"};

  HomologyProfile h;
  try {
    h = betti_numbers(ball, Coefficients::integers());
  } catch (const HomologyTooLarge&) {
    h = betti_numbers(ball, Coefficients::rationals());
    auto h2 = betti_numbers(ball, Coefficients::mod(2));
    if (h2.betti != h.betti) return {false, "mod 2 betti numbers differ from rational ones"};
  }
  std::vector<long long> want{1, 0, 0, 0};
  if (h.betti != want) return {false, "ball betti numbers are not (1,0,0,0)"};
  for (const auto& t : h.torsion)
    if (!t.empty()) return {false, "ball homology has torsion"};
  return {true, ""};
}

std::string serialize_certificate(const FillCertificate& cert) {
  std::string out = serialize(cert.ball);
  for (auto [i, j] : cert.square_map) out += "bmap " + std::to_string(i) + " " + std::to_string(j) + "\n";
  return out;
}

FillCertificate parse_certificate(const std::string& text) {
  FillCertificate cert;
  std::string body;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("bmap", 0) == 0) {
      std::istringstream ls(line.substr(4));
      long long i = -1, j = -1;
      if (!(ls >> i >> j) || i < 0 || j < 0) throw PreconditionError("malformed bmap line: " + line);
      cert.square_map.emplace_back(i, j);
    } else {
      body += line;
      body += '\n';
    }
  }
  cert.ball = parse_complex(body);
  return cert;
}

}  // namespace cubesphere
