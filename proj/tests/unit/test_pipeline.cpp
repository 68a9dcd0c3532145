#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <stdexcept>

#include "cotagnet/error.hpp"
#include "cotagnet/fileio.hpp"
#include "cotagnet/pipeline.hpp"
#include "json.hpp"

using namespace cotagnet;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kFixtures = COTAGNET_FIXTURES;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("cotagnet_unit_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

RunOptions opts_in(const fs::path& dir, unsigned jobs = 1) {
  RunOptions o;
  o.out_dir = dir;
  o.seed = 77;
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST_CASE("community names from paths") {
  CHECK(community_from_path("dumps/coffee.stackexchange.com/Posts.xml").community == "coffee");
  CHECK(community_from_path("x/coffee.tsv").community == "coffee");
  const auto r = community_from_path("out/coffee.rep12.tsv");
  CHECK(r.community == "coffee");
  CHECK(*r.replicate == 12);
  CHECK(r.stem() == "coffee.rep12");
  CHECK_FALSE(community_from_path("a.repx.tsv").replicate.has_value());
  CHECK(community_from_path("m/coffee.rep1.analysis.json").replicate == 1);
}

TEST_CASE("parallel_for covers every index and rethrows the lowest failure") {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  CHECK(std::count(hit.begin(), hit.end(), 1) == 100);
  try {
    parallel_for(50, 3, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("not called"); });
}

TEST_CASE("atomic write replaces content and leaves no temp files") {
  TempDir tmp("atomic");
  const fs::path p = tmp.path / "sub" / "f.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(read_file(p) == "two");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(p.parent_path())) files += e.is_regular_file();
  CHECK(files == 1);
  CHECK_THROWS_AS((void)read_file(tmp.path / "missing"), DataError);
}

TEST_CASE("ingest the xml fixture") {
  TempDir tmp("ingest");
  const auto r = cmd_ingest({kFixtures}, opts_in(tmp.path));
  CHECK(r.communities == 2);  // tiny Posts.xml + triangle.tsv
  const auto s = Json::parse(read_file(tmp.path / "tiny.summary.json"));
  CHECK(s["n_questions"] == 3);
  CHECK(s["n_tags"] == 5);
  CHECK(s["stats"]["skipped_non_question"] == 2);
  CHECK(read_file(tmp.path / "tiny.tsv") == "1\tbeans,storage\n3\tbeans,espresso,grinding\n5\tmoka-pot\n");
}

TEST_CASE("ingest errors") {
  TempDir tmp("ingest_err");
  CHECK(cmd_ingest({tmp.path}, opts_in(tmp.path / "out")).communities == 0);
  CHECK_THROWS_AS((void)cmd_ingest({tmp.path / "nope.tsv"}, opts_in(tmp.path)), DataError);
  try {
    (void)cmd_ingest({kFixtures / "corrupt.xml"}, opts_in(tmp.path));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.byte_offset().has_value());
  }
}

TEST_CASE("generate, replicate and analyze are deterministic and independent of jobs") {
  TempDir tmp("determinism");
  GeneratorConfig c{60, 400, 1100, 0.0, 1.3, 9, false};
  (void)cmd_generate(c, tmp.path / "in" / "synth.tsv");
  CHECK(fs::exists(tmp.path / "in" / "synth.report.json"));

  ReplicateOptions ro;
  ro.reps = 3;
  const auto a = cmd_replicate({tmp.path / "in" / "synth.tsv"}, ro, opts_in(tmp.path / "a", 1));
  const auto b = cmd_replicate({tmp.path / "in" / "synth.tsv"}, ro, opts_in(tmp.path / "b", 4));
  CHECK(a.written.size() == 6);
  CHECK(!a.warnings.empty());  // no fit file next to the input
  for (int rep = 1; rep <= 3; ++rep) {
    const std::string f = "synth.rep" + std::to_string(rep) + ".tsv";
    CHECK(read_file(tmp.path / "a" / f) == read_file(tmp.path / "b" / f));
  }
  CHECK(read_file(tmp.path / "a" / "synth.rep1.tsv") != read_file(tmp.path / "a" / "synth.rep2.tsv"));

  (void)cmd_analyze({tmp.path / "a"}, {}, opts_in(tmp.path / "ra", 1));
  (void)cmd_analyze({tmp.path / "b"}, {}, opts_in(tmp.path / "rb", 3));
  CHECK(read_file(tmp.path / "ra" / "analysis.csv") == read_file(tmp.path / "rb" / "analysis.csv"));

  (void)cmd_analyze({tmp.path / "in"}, {}, opts_in(tmp.path / "rd", 1));
  const auto cmp = cmd_compare({tmp.path / "rd"}, {tmp.path / "ra"}, opts_in(tmp.path / "cmp"));
  CHECK(cmp.communities == 1);
  const auto j = Json::parse(read_file(tmp.path / "cmp" / "comparison.json"));
  CHECK(j["communities"] == Json::array({"synth"}));
}

TEST_CASE("fit uses the family filter and replicate reads fit files") {
  TempDir tmp("fit");
  GeneratorConfig c{80, 500, 1400, 0.0, 1.4, 3, false};
  (void)cmd_generate(c, tmp.path / "in" / "one.tsv");
  c.seed = 4;
  (void)cmd_generate(c, tmp.path / "in" / "two.tsv");
  (void)cmd_fit({tmp.path / "in"}, {Family::kLognormal}, opts_in(tmp.path / "in"));
  const auto csv = read_file(tmp.path / "in" / "fits.csv");
  CHECK(csv.rfind("community,n,lognormal_mu,lognormal_sigma,lognormal_D,lognormal_loglik\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(fs::exists(tmp.path / "in" / "fit_population.json"));

  ReplicateOptions ro;
  const auto r = cmd_replicate({tmp.path / "in" / "one.tsv"}, ro, opts_in(tmp.path / "rep"));
  CHECK(r.warnings.empty());
  ro.reps = 0;
  CHECK_THROWS_AS((void)cmd_replicate({tmp.path / "in" / "one.tsv"}, ro, opts_in(tmp.path / "rep")),
                  UsageError);
}

TEST_CASE("compare rejects disjoint community sets") {
  TempDir tmp("compare");
  (void)cmd_analyze({kFixtures / "triangle.tsv"}, {}, opts_in(tmp.path / "d"));
  GeneratorConfig c{30, 100, 250, 0.0, 1.0, 1, false};
  (void)cmd_generate(c, tmp.path / "g" / "other.tsv");
  (void)cmd_analyze({tmp.path / "g"}, {}, opts_in(tmp.path / "m"));
  CHECK_THROWS_AS((void)cmd_compare({tmp.path / "d"}, {tmp.path / "m"}, opts_in(tmp.path)), DataError);
}
