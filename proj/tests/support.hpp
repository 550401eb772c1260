#pragma once

#include <cstdint>
#include <vector>

#include "hypernull/hypernull.hpp"

namespace hypernull::testing {

// Small random hypergraph with sizes in [2, max_size], built by drawing
// distinct nodes per edge; parallel edges are allowed and do occur.
inline Hypergraph random_hypergraph(std::uint64_t seed, std::size_t n = 8, std::size_t m = 10,
                                    std::size_t max_size = 4) {
  Rng rng(seed);
  Hypergraph h(n);
  std::vector<NodeId> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<NodeId>(v);
  for (std::size_t e = 0; e < m; ++e) {
    const auto k = static_cast<std::size_t>(rng.between(2, static_cast<std::int64_t>(std::min(max_size, n))));
    rng.partial_shuffle(std::span<NodeId>(all), k);
    h.add_edge(Edge::from_unsorted(std::vector<NodeId>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k))));
  }
  return h;
}

inline Hypergraph parallel_pair() {
  return Hypergraph(4, {Edge{0, 1}, Edge{0, 1}, Edge{2, 3}, Edge{0, 2, 3}});
}

}  // namespace hypernull::testing
