#include "doctest.h"

#include <cmath>
#include <sstream>

#include "cotagnet/cotag.hpp"
#include "cotagnet/error.hpp"
#include "cotagnet/generator.hpp"
#include "oracles.hpp"

using namespace cotagnet;
using doctest::Approx;

namespace {

CotagGraph complete(std::size_t n, std::uint64_t w = 1) {
  std::vector<WeightedEdge> e;
  for (TagId s = 0; s < n; ++s)
    for (TagId t = s + 1; t < n; ++t) e.push_back({s, t, w});
  return CotagGraph(n, e);
}

}  // namespace

TEST_CASE("projection counts shared questions") {
  // q0: a b c   q1: a b   q2: c d
  const BipartiteTagGraph b({"a", "b", "c", "d"}, {"q0", "q1", "q2"},
                            {{0, 1}, {0, 1}, {0, 2}, {2}});
  const auto g = project(b);
  CHECK(g.n_edges() == 4);
  CHECK(g.weight(0, 1) == 2);
  CHECK(g.weight(1, 0) == 2);
  CHECK(g.weight(0, 2) == 1);
  CHECK(g.weight(2, 3) == 1);
  CHECK(g.weight(0, 3) == 0);
  CHECK(weighted_degree(g, 0) == 3);
  CHECK(unweighted_degree(g, 0) == 2);
  CHECK(g.max_weight() == 2);
  CHECK_THROWS_AS((void)g.neighbors(9), DataError);
}

TEST_CASE("weighted degree identity k_t = sum over questions of (|q| - 1)") {
  GeneratorConfig c{80, 600, 1500, 0.0, 1.2, 5, false};
  const auto gen = generate(c);
  const auto g = project(gen.graph);
  const auto qt = gen.graph.question_tags();
  for (TagId t = 0; t < gen.graph.n_tags(); ++t) {
    std::uint64_t expect = 0;
    for (QuestionIndex q : gen.graph.questions_of(t)) expect += qt.size(q) - 1;
    CHECK(weighted_degree(g, t) == expect);
  }
}

TEST_CASE("edge validation") {
  CHECK_THROWS_AS(CotagGraph(3, {{1, 1, 1}}), DataError);
  CHECK_THROWS_AS(CotagGraph(3, {{2, 1, 1}}), DataError);
  CHECK_THROWS_AS(CotagGraph(3, {{0, 3, 1}}), DataError);
  CHECK_THROWS_AS(CotagGraph(3, {{0, 1, 0}}), DataError);
  CHECK_THROWS_AS(CotagGraph(3, {{0, 1, 1}, {0, 1, 2}}), DataError);
}

TEST_CASE("analytic clustering cases") {
  CHECK(clustering_unweighted(complete(4)) == Approx(1.0).epsilon(1e-12));
  CHECK(clustering_weighted(complete(4, 5)) == Approx(1.0).epsilon(1e-12));

  const CotagGraph star(5, {{0, 1, 1}, {0, 2, 3}, {0, 3, 1}, {0, 4, 2}});
  CHECK(clustering_unweighted(star) == 0.0);
  CHECK(clustering_weighted(star) == 0.0);

  const CotagGraph tri(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 8}});
  CHECK(clustering_unweighted(tri) == Approx(1.0).epsilon(1e-12));
  CHECK(clustering_weighted(tri) == Approx(0.25).epsilon(1e-12));
  CHECK(clustering_logweighted(tri) == Approx(0.46341207071312828).epsilon(1e-12));

  const auto r = clustering_report(tri);
  CHECK(r.log_c_weighted == Approx(std::log(0.25)).epsilon(1e-12));
  CHECK(r.n_nodes_deg_lt2 == 0);
}

TEST_CASE("low-degree nodes count as zero in the average") {
  // triangle 0-1-2 plus pendant 3 on 0
  const CotagGraph g(4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {0, 3, 1}});
  const auto local = local_clustering(g);
  CHECK(local.unweighted[0] == Approx(1.0 / 3));
  CHECK(local.unweighted[3] == 0.0);
  CHECK(clustering_unweighted(g) == Approx((1.0 / 3 + 1 + 1 + 0) / 4));
  CHECK(clustering_report(g).n_nodes_deg_lt2 == 1);
}

TEST_CASE("empty graphs") {
  const CotagGraph none(5, {});
  CHECK(clustering_unweighted(none) == 0.0);
  CHECK_THROWS_AS((void)clustering_weighted(none), NumericError);
  CHECK_THROWS_AS((void)clustering_report(none), NumericError);
  CHECK(clustering_unweighted(CotagGraph(0, {})) == 0.0);
}

TEST_CASE("optimized clustering matches brute force") {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng.below(25);
    const auto g = oracle::random_cotag_graph(n, 0.1 + 0.8 * rng.uniform(), 1 + rng.below(20), rng);
    if (g.n_edges() == 0) continue;
    const auto ref = oracle::brute_force_clustering(g);
    CHECK(local_clustering(g).triangles == ref.triangles);
    CHECK(clustering_unweighted(g) == Approx(ref.c).epsilon(1e-12));
    CHECK(clustering_weighted(g) == Approx(ref.cw).epsilon(1e-12));
    CHECK(clustering_logweighted(g) == Approx(ref.clw).epsilon(1e-12));
  }
}

TEST_CASE("equal weights make C_w equal C") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = oracle::random_cotag_graph(20, 0.4, 1, rng);
    if (g.n_edges() == 0) continue;
    std::vector<WeightedEdge> e = g.edges();
    for (auto& x : e) x.weight = 7;
    const CotagGraph h(20, e);
    CHECK(clustering_weighted(h) == Approx(clustering_unweighted(h)).epsilon(1e-12));
    CHECK(clustering_logweighted(h) == Approx(clustering_unweighted(h)).epsilon(1e-12));
  }
}

TEST_CASE("edge csv") {
  const CotagGraph g(3, {{0, 2, 4}, {0, 1, 1}});
  std::ostringstream out;
  write_edge_csv(out, g, {"a", "b", "c"});
  CHECK(out.str() == "tag_s,tag_t,weight\na,b,1\na,c,4\n");
  CHECK_THROWS_AS(write_edge_csv(out, g, {"a"}), DataError);
}
