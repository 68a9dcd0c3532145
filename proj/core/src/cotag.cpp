#include "cotagnet/cotag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "cotagnet/error.hpp"

namespace cotagnet {

CotagGraph::CotagGraph(std::size_t n_tags, std::vector<WeightedEdge> edges) : n_tags_(n_tags) {
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.s != b.s ? a.s < b.s : a.t < b.t;
  });
  std::vector<std::size_t> degree(n_tags, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.s >= e.t) throw DataError("co-tag edge must have s < t (no self-loops)");
    if (e.t >= n_tags) throw DataError("co-tag edge endpoint out of range");
    if (e.weight < 1) throw DataError("co-tag edge weight must be >= 1");
    if (i > 0 && edges[i - 1].s == e.s && edges[i - 1].t == e.t) {
      throw DataError("duplicate co-tag edge");
    }
    ++degree[e.s];
    ++degree[e.t];
    max_weight_ = std::max(max_weight_, e.weight);
  }
  offsets_.assign(n_tags + 1, 0);
  for (std::size_t t = 0; t < n_tags; ++t) offsets_[t + 1] = offsets_[t] + degree[t];
  neighbors_.resize(offsets_[n_tags]);
  weights_.resize(offsets_[n_tags]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (s, t): the first pass fills each row with its
  // smaller neighbours in order, the second appends the larger ones.
  for (const auto& e : edges) {
    neighbors_[cursor[e.t]] = e.s;
    weights_[cursor[e.t]++] = e.weight;
  }
  for (const auto& e : edges) {
    neighbors_[cursor[e.s]] = e.t;
    weights_[cursor[e.s]++] = e.weight;
  }
}

void CotagGraph::check(TagId t) const {
  if (t >= n_tags_) throw DataError("unknown tag id " + std::to_string(t));
}

std::span<const TagId> CotagGraph::neighbors(TagId t) const {
  check(t);
  return {neighbors_.data() + offsets_[t], offsets_[t + 1] - offsets_[t]};
}

std::span<const std::uint64_t> CotagGraph::weights(TagId t) const {
  check(t);
  return {weights_.data() + offsets_[t], offsets_[t + 1] - offsets_[t]};
}

std::uint64_t CotagGraph::weight(TagId s, TagId t) const {
  const auto nb = neighbors(s);
  const auto it = std::lower_bound(nb.begin(), nb.end(), t);
  if (it == nb.end() || *it != t) return 0;
  return weights(s)[static_cast<std::size_t>(it - nb.begin())];
}

std::vector<WeightedEdge> CotagGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(n_edges());
  for (TagId s = 0; s < n_tags_; ++s) {
    for (std::size_t i = offsets_[s]; i < offsets_[s + 1]; ++i) {
      if (neighbors_[i] > s) out.push_back({s, neighbors_[i], weights_[i]});
    }
  }
  return out;
}

CotagGraph project(const BipartiteTagGraph& bipartite) {
  const QuestionTags qt = bipartite.question_tags();
  const std::size_t n = bipartite.n_tags();
  std::vector<std::uint64_t> count(n, 0);
  std::vector<TagId> touched;
  std::vector<WeightedEdge> edges;
  for (TagId s = 0; s < n; ++s) {
    for (QuestionIndex q : bipartite.questions_of(s)) {
      for (TagId t : qt.of(q)) {
        if (t <= s) continue;
        if (count[t]++ == 0) touched.push_back(t);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (TagId t : touched) {
      edges.push_back({s, t, count[t]});
      count[t] = 0;
    }
    touched.clear();
  }
  return CotagGraph(n, std::move(edges));
}

std::uint64_t weighted_degree(const CotagGraph& g, TagId t) {
  const auto w = g.weights(t);
  return std::accumulate(w.begin(), w.end(), std::uint64_t{0});
}

std::size_t unweighted_degree(const CotagGraph& g, TagId t) { return g.neighbors(t).size(); }

LocalClustering local_clustering(const CotagGraph& g) {
  const std::size_t n = g.n_tags();
  LocalClustering out;
  out.triangles.assign(n, 0);
  out.unweighted.assign(n, 0.0);
  out.weighted.assign(n, 0.0);
  out.logweighted.assign(n, 0.0);
  if (g.n_edges() == 0) return out;

  const double max_w = static_cast<double>(g.max_weight());
  const double max_lw = std::log1p(max_w);

  // Orient every edge from lower to higher (degree, id) rank so each
  // triangle is found once, from its lowest-ranked corner.
  auto before = [&](TagId a, TagId b) {
    const std::size_t da = g.neighbors(a).size();
    const std::size_t db = g.neighbors(b).size();
    return da != db ? da < db : a < b;
  };
  std::vector<std::vector<std::pair<TagId, std::uint64_t>>> out_edges(n);
  for (TagId u = 0; u < n; ++u) {
    const auto nb = g.neighbors(u);
    const auto w = g.weights(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (before(u, nb[i])) out_edges[u].emplace_back(nb[i], w[i]);
    }
  }

  std::vector<double> sum_w(n, 0.0);
  std::vector<double> sum_lw(n, 0.0);
  std::vector<std::uint64_t> mark(n, 0);
  for (TagId u = 0; u < n; ++u) {
    for (const auto& [v, w] : out_edges[u]) mark[v] = w;
    for (const auto& [v, w_uv] : out_edges[u]) {
      for (const auto& [z, w_vz] : out_edges[v]) {
        const std::uint64_t w_uz = mark[z];
        if (w_uz == 0) continue;
        // Multiply in ascending weight order so the term is independent of
        // which corner found the triangle.
        std::array<std::uint64_t, 3> ws{w_uv, w_vz, w_uz};
        std::sort(ws.begin(), ws.end());
        const double prod = static_cast<double>(ws[0]) * static_cast<double>(ws[1]) *
                            static_cast<double>(ws[2]);
        const double term_w = std::cbrt(prod) / max_w;
        const double lp = std::log1p(static_cast<double>(ws[0])) *
                          std::log1p(static_cast<double>(ws[1])) *
                          std::log1p(static_cast<double>(ws[2]));
        const double term_lw = std::cbrt(lp) / max_lw;
        for (TagId x : {u, v, z}) {
          ++out.triangles[x];
          sum_w[x] += term_w;
          sum_lw[x] += term_lw;
        }
      }
    }
    for (const auto& [v, w] : out_edges[u]) mark[v] = 0;
  }

  for (TagId u = 0; u < n; ++u) {
    const double d = static_cast<double>(g.neighbors(u).size());
    if (d < 2.0) continue;
    const double pairs = d * (d - 1.0);
    out.unweighted[u] = 2.0 * static_cast<double>(out.triangles[u]) / pairs;
    // Ordered neighbour pairs: each triangle at u is counted twice.
    out.weighted[u] = 2.0 * sum_w[u] / pairs;
    out.logweighted[u] = 2.0 * sum_lw[u] / pairs;
  }
  return out;
}

namespace {

double mean_or_zero(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void require_edges(const CotagGraph& g) {
  if (g.n_edges() == 0) throw NumericError("weighted clustering: no maximum weight (graph has no edges)");
}

}  // namespace

double clustering_unweighted(const CotagGraph& g) {
  return mean_or_zero(local_clustering(g).unweighted);
}

double clustering_weighted(const CotagGraph& g) {
  require_edges(g);
  return mean_or_zero(local_clustering(g).weighted);
}

double clustering_logweighted(const CotagGraph& g) {
  require_edges(g);
  return mean_or_zero(local_clustering(g).logweighted);
}

ClusteringReport clustering_report(const CotagGraph& g) {
  require_edges(g);
  const LocalClustering local = local_clustering(g);
  ClusteringReport r;
  r.n_nodes = g.n_tags();
  for (TagId t = 0; t < g.n_tags(); ++t) {
    if (g.neighbors(t).size() < 2) ++r.n_nodes_deg_lt2;
  }
  r.c_unweighted = mean_or_zero(local.unweighted);
  r.c_weighted = mean_or_zero(local.weighted);
  r.c_logweighted = mean_or_zero(local.logweighted);
  r.log_c_weighted =
      r.c_weighted > 0.0 ? std::log(r.c_weighted) : -std::numeric_limits<double>::infinity();
  return r;
}

void write_edge_csv(std::ostream& out, const CotagGraph& g, const std::vector<std::string>& names) {
  if (names.size() != g.n_tags()) throw DataError("edge CSV: name table does not match graph");
  out << "tag_s,tag_t,weight\n";
  for (const auto& e : g.edges()) {
    out << names[e.s] << ',' << names[e.t] << ',' << e.weight << '\n';
  }
}

}  // namespace cotagnet
