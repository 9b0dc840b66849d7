#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace cubesphere::detail {

// Calls emit(i, j) for every pair of chords whose endpoints interleave around the circle.
// Endpoints are integer positions with a < b; equal endpoints count as interleaving.
template <class Emit>
void interleaved_pairs(const std::vector<std::pair<long long, long long>>& chords, Emit&& emit) {
  struct Event {
    long long key;
    bool open;
    std::size_t id;
  };
  std::vector<Event> ev;
  ev.reserve(2 * chords.size());
  for (std::size_t i = 0; i < chords.size(); ++i) {
    ev.push_back({chords[i].first, true, i});
    ev.push_back({chords[i].second, false, i});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) {
    return x.key != y.key ? x.key < y.key : x.open < y.open;
  });
  for (std::size_t k = 1; k < ev.size(); ++k)
    if (ev[k].key == ev[k - 1].key && ev[k].id != ev[k - 1].id) emit(ev[k - 1].id, ev[k].id);
  std::vector<std::size_t> open;
  for (const auto& e : ev) {
    if (e.open) {
      open.push_back(e.id);
      continue;
    }
    auto it = std::find(open.rbegin(), open.rend(), e.id).base() - 1;
    for (auto j = it + 1; j != open.end(); ++j) emit(e.id, *j);
    open.erase(it);
  }
}

}  // namespace cubesphere::detail
