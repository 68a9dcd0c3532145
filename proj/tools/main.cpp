#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cotagnet/distfit.hpp"
#include "cotagnet/error.hpp"
#include "cotagnet/pipeline.hpp"
#include "cotagnet/report.hpp"

namespace fs = std::filesystem;
using namespace cotagnet;

namespace {

int report(const CommandResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (r.communities == 0) std::cerr << "warning: zero communities processed\n";
  for (const auto& p : r.written) std::cout << p.string() << "\n";
  return 0;
}

int fail(const std::string& json, ExitCode code) {
  std::cerr << json;
  return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cotagnet: tag co-occurrence networks from question/tag data"};
  app.set_version_flag("--version", "cotagnet 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out = ".";
  app.add_option("--seed", seed, "Base random seed")->envname("COTAGNET_SEED");
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)")->envname("COTAGNET_JOBS");
  app.add_option("--out", out, "Output directory (output file for generate)")->envname("COTAGNET_OUT");

  std::vector<std::string> inputs;

  auto* ingest = app.add_subcommand("ingest", "Posts.xml or TSV files/directories -> canonical TSV + summary");
  ingest->add_option("inputs", inputs, "Input files or directories")->required();

  auto* fit = app.add_subcommand("fit", "Fit tag-frequency distributions per community");
  std::vector<std::string> family_names;
  fit->add_option("inputs", inputs, "TSV files or directories")->required();
  fit->add_option("--family", family_names,
                  "Restrict to these families (lognormal, powerlaw, truncated_powerlaw, "
                  "stretched_exponential)");

  auto* gen = app.add_subcommand("generate", "Generate one random tag-question graph");
  GeneratorConfig config;
  gen->add_option("--tags", config.n_tags, "Number of tags")->required();
  gen->add_option("--questions", config.n_questions, "Target number of tagged questions")->required();
  gen->add_option("--occurrences", config.occurrences, "Target number of tag occurrences")->required();
  gen->add_option("--mu", config.mu, "Lognormal mu")->required();
  gen->add_option("--sigma", config.sigma, "Lognormal sigma")->required();
  gen->add_flag("--clamp", config.clamp_to_questions, "Clamp frequencies above the question count");

  auto* rep = app.add_subcommand("replicate", "Generate model replicates of fitted communities");
  ReplicateOptions ropts;
  std::string fits_dir;
  rep->add_option("inputs", inputs, "Community TSV files or directories")->required();
  rep->add_option("--reps", ropts.reps, "Replicates per community")->default_val(1);
  rep->add_option("--fits", fits_dir, "Directory with <community>.fit.json files");
  rep->add_flag("--clamp", ropts.clamp_to_questions, "Clamp frequencies above the question count");

  auto* analyze = app.add_subcommand("analyze", "Co-tag statistics per community");
  AnalyzeOptions aopts;
  analyze->add_option("inputs", inputs, "TSV files or directories")->required();
  analyze->add_flag("--tag-table", aopts.write_tag_table, "Also write <community>.tags.csv");
  analyze->add_flag("--edges", aopts.write_edges, "Also write <community>.edges.csv");

  auto* compare = app.add_subcommand("compare", "Compare data and model analysis reports");
  std::vector<std::string> data_reports;
  std::vector<std::string> model_reports;
  compare->add_option("--data", data_reports, "Data analysis reports or directories")->required();
  compare->add_option("--model", model_reports, "Model analysis reports or directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(error_json("usage", e.what(), ExitCode::kUsage), ExitCode::kUsage);
  }

  RunOptions opts;
  opts.out_dir = out;
  opts.seed = seed;
  opts.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  const std::vector<fs::path> paths(inputs.begin(), inputs.end());

  try {
    if (*ingest) return report(cmd_ingest(paths, opts));
    if (*fit) {
      std::vector<Family> families;
      for (Family f : kAllFamilies) {
        if (family_names.empty()) {
          families.push_back(f);
          continue;
        }
        for (const auto& n : family_names) {
          if (parse_family(n) == f) {
            families.push_back(f);
            break;
          }
        }
      }
      for (const auto& n : family_names) (void)parse_family(n);
      return report(cmd_fit(paths, families, opts));
    }
    if (*gen) {
      if (app.count("--out") == 0 && std::getenv("COTAGNET_OUT") == nullptr) {
        throw UsageError("generate needs --out FILE");
      }
      config.seed = seed;
      return report(cmd_generate(config, out));
    }
    if (*rep) {
      if (!fits_dir.empty()) ropts.fits_dir = fs::path(fits_dir);
      return report(cmd_replicate(paths, ropts, opts));
    }
    if (*analyze) return report(cmd_analyze(paths, aopts, opts));
    if (*compare) {
      return report(cmd_compare({data_reports.begin(), data_reports.end()},
                                {model_reports.begin(), model_reports.end()}, opts));
    }
  } catch (const Error& e) {
    return fail(error_json(e), e.exit_code());
  } catch (const std::exception& e) {
    return fail(error_json("internal", e.what(), ExitCode::kData), ExitCode::kData);
  }
  return 0;
}
