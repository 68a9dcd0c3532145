#pragma once

// Slow reference implementations used to check the optimized code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cotagnet/cotag.hpp"
#include "cotagnet/rng.hpp"

namespace cotagnet::oracle {

struct Clustering {
  std::vector<std::uint64_t> triangles;
  double c = 0.0;
  double cw = 0.0;
  double clw = 0.0;
};

// O(n^3) over a dense weight matrix.
inline Clustering brute_force_clustering(const CotagGraph& g) {
  const std::size_t n = g.n_tags();
  std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(n, 0));
  std::uint64_t max_w = 0;
  for (const auto& e : g.edges()) {
    w[e.s][e.t] = w[e.t][e.s] = e.weight;
    max_w = std::max(max_w, e.weight);
  }
  Clustering out;
  out.triangles.assign(n, 0);
  if (n == 0) return out;
  const double lmax = std::log1p(static_cast<double>(max_w));
  double sc = 0, scw = 0, sclw = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n; ++j) d += w[i][j] > 0;
    double tw = 0, tlw = 0;
    std::uint64_t tri = 0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (j == k || w[i][j] == 0 || w[i][k] == 0 || w[j][k] == 0) continue;
        ++tri;
        const double a = static_cast<double>(w[i][j]);
        const double b = static_cast<double>(w[i][k]);
        const double c = static_cast<double>(w[j][k]);
        tw += std::cbrt(a * b * c) / static_cast<double>(max_w);
        tlw += std::cbrt(std::log1p(a) * std::log1p(b) * std::log1p(c)) / lmax;
      }
    }
    out.triangles[i] = tri / 2;
    if (d < 2) continue;
    const double pairs = static_cast<double>(d) * static_cast<double>(d - 1);
    sc += static_cast<double>(tri) / pairs;
    scw += tw / pairs;
    sclw += tlw / pairs;
  }
  out.c = sc / static_cast<double>(n);
  out.cw = scw / static_cast<double>(n);
  out.clw = sclw / static_cast<double>(n);
  return out;
}

// Erdos-Renyi style weighted graph on n nodes.
inline CotagGraph random_cotag_graph(std::size_t n, double p, std::uint64_t max_weight, Rng& rng) {
  std::vector<WeightedEdge> edges;
  for (TagId s = 0; s < n; ++s) {
    for (TagId t = s + 1; t < n; ++t) {
      if (rng.uniform() < p) edges.push_back({s, t, 1 + rng.below(max_weight)});
    }
  }
  return CotagGraph(n, std::move(edges));
}

}  // namespace cotagnet::oracle
