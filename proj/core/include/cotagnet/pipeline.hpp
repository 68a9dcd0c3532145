#pragma once

// File-level commands behind the CLI. Every command reads plain files,
// writes its artifacts atomically under `out_dir`, and returns what it wrote.
// Outputs depend only on the inputs and the seed, never on `jobs`.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cotagnet/distfit.hpp"
#include "cotagnet/generator.hpp"

namespace cotagnet {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct CommandResult {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
  std::size_t communities = 0;
};

// Community name and replicate number encoded in an input path:
//   <dir>/coffee.stackexchange.com/Posts.xml -> coffee
//   coffee.tsv -> coffee;  coffee.rep2.tsv -> coffee, replicate 2
struct CommunityName {
  std::string community;
  std::optional<int> replicate;
  [[nodiscard]] std::string stem() const;  // community[.repN]
};
[[nodiscard]] CommunityName community_from_path(const std::filesystem::path& path);

// Runs fn(0..n-1) on up to `jobs` threads. If any call throws, the exception
// from the lowest index is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn);

// Posts.xml or TSV inputs -> <c>.tsv + <c>.summary.json.
CommandResult cmd_ingest(const std::vector<std::filesystem::path>& inputs, const RunOptions& opts);

// TSV inputs -> <c>.fit.json each, fits.csv, fit_population.json.
CommandResult cmd_fit(const std::vector<std::filesystem::path>& inputs,
                      const std::vector<Family>& families, const RunOptions& opts);

// One graph from explicit parameters -> `out_file` (TSV) + <out_file>.report.json.
CommandResult cmd_generate(const GeneratorConfig& config, const std::filesystem::path& out_file);

struct ReplicateOptions {
  int reps = 1;
  bool clamp_to_questions = false;
  // Directory holding <c>.fit.json; when absent or missing a community the
  // lognormal is fitted from the TSV.
  std::optional<std::filesystem::path> fits_dir;
};

// Community TSVs -> <c>.rep<r>.tsv + <c>.rep<r>.report.json for r = 1..reps.
CommandResult cmd_replicate(const std::vector<std::filesystem::path>& inputs,
                            const ReplicateOptions& ropts, const RunOptions& opts);

struct AnalyzeOptions {
  bool write_tag_table = false;
  bool write_edges = false;
};

// TSV inputs -> <c>.analysis.json each + analysis.csv.
CommandResult cmd_analyze(const std::vector<std::filesystem::path>& inputs,
                          const AnalyzeOptions& aopts, const RunOptions& opts);

// Analysis reports (files or directories) -> comparison.json.
CommandResult cmd_compare(const std::vector<std::filesystem::path>& data_reports,
                          const std::vector<std::filesystem::path>& model_reports,
                          const RunOptions& opts);

}  // namespace cotagnet

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

namespace cotagnet {

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cotagnet
