#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cotagnet/bipartite.hpp"

namespace cotagnet {

struct WeightedEdge {
  TagId s = 0;
  TagId t = 0;
  std::uint64_t weight = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Weighted undirected co-tagging graph on tag ids, stored as symmetric CSR
// with ascending neighbour lists. Immutable after construction.
class CotagGraph {
 public:
  CotagGraph() = default;

  // Edges must satisfy s < t, weight >= 1, and be free of duplicates.
  // Throws DataError otherwise.
  CotagGraph(std::size_t n_tags, std::vector<WeightedEdge> edges);

  [[nodiscard]] std::size_t n_tags() const noexcept { return n_tags_; }
  [[nodiscard]] std::size_t n_edges() const noexcept { return neighbors_.size() / 2; }

  [[nodiscard]] std::span<const TagId> neighbors(TagId t) const;
  [[nodiscard]] std::span<const std::uint64_t> weights(TagId t) const;

  // 0 when s and t are not adjacent.
  [[nodiscard]] std::uint64_t weight(TagId s, TagId t) const;
  [[nodiscard]] std::uint64_t max_weight() const noexcept { return max_weight_; }

  // Edges with s < t, sorted by (s, t).
  [[nodiscard]] std::vector<WeightedEdge> edges() const;

 private:
  void check(TagId t) const;

  std::size_t n_tags_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<TagId> neighbors_;
  std::vector<std::uint64_t> weights_;
  std::uint64_t max_weight_ = 0;
};

// w(s, t) = number of questions tagged with both s and t. Runs in
// O(sum over questions of |tags(q)|^2).
[[nodiscard]] CotagGraph project(const BipartiteTagGraph& bipartite);

// k_t: sum of edge weights at t. Throws DataError for an unknown id.
[[nodiscard]] std::uint64_t weighted_degree(const CotagGraph& g, TagId t);
// d_t: number of distinct co-tags of t.
[[nodiscard]] std::size_t unweighted_degree(const CotagGraph& g, TagId t);

// Per-node clustering terms. Nodes with fewer than two neighbours have all
// values zero.
struct LocalClustering {
  std::vector<std::uint64_t> triangles;  // Delta_u
  std::vector<double> unweighted;        // 2 Delta_u / (d (d - 1))
  std::vector<double> weighted;          // geometric-mean weights, normalized by max w
  std::vector<double> logweighted;       // same with w' = ln(w + 1)
};

[[nodiscard]] LocalClustering local_clustering(const CotagGraph& g);

// Averages over all tags, including those with fewer than two neighbours
// (they contribute 0).
[[nodiscard]] double clustering_unweighted(const CotagGraph& g);
// Throw NumericError on an edgeless graph (no maximum weight).
[[nodiscard]] double clustering_weighted(const CotagGraph& g);
[[nodiscard]] double clustering_logweighted(const CotagGraph& g);

struct ClusteringReport {
  double c_unweighted = 0.0;
  double c_weighted = 0.0;
  double log_c_weighted = 0.0;  // ln(C_w); -inf when C_w = 0
  double c_logweighted = 0.0;
  std::size_t n_nodes = 0;
  std::size_t n_nodes_deg_lt2 = 0;
};

[[nodiscard]] ClusteringReport clustering_report(const CotagGraph& g);

// CSV `tag_s,tag_t,weight` sorted by (s, t), with a header row.
void write_edge_csv(std::ostream& out, const CotagGraph& g, const std::vector<std::string>& names);

}  // namespace cotagnet
