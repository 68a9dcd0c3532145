#include "cotagnet/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cotagnet/analysis.hpp"
#include "cotagnet/cotag.hpp"
#include "cotagnet/error.hpp"
#include "cotagnet/fileio.hpp"
#include "cotagnet/ingest.hpp"
#include "cotagnet/report.hpp"

namespace cotagnet {

namespace fs = std::filesystem;

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_suffix(std::string s, std::string_view suffix) {
  if (ends_with(s, suffix)) s.resize(s.size() - suffix.size());
  return s;
}

bool is_xml(const fs::path& p) { return ends_with(p.filename().string(), ".xml"); }

CommunityDataset load_dataset(const fs::path& path, const std::string& community) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return is_xml(path) ? parse_posts_xml(in, community) : parse_tsv(in, community);
  } catch (const ParseError& e) {
    throw e.in_file(path.string());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

BipartiteTagGraph load_graph(const fs::path& path, const std::string& community) {
  return build_bipartite(load_dataset(path, community)).graph;
}

std::vector<double> as_doubles(const std::vector<std::uint64_t>& v) {
  return {v.begin(), v.end()};
}

// Rejects two inputs that would write the same artifact.
void check_unique(const std::vector<CommunityName>& names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n.stem()).second) throw DataError("two inputs map to community '" + n.stem() + "'");
  }
}

std::vector<CommunityName> names_of(const std::vector<fs::path>& inputs) {
  std::vector<CommunityName> names;
  names.reserve(inputs.size());
  for (const auto& p : inputs) names.push_back(community_from_path(p));
  check_unique(names);
  return names;
}

}  // namespace

std::string CommunityName::stem() const {
  return replicate ? community + ".rep" + std::to_string(*replicate) : community;
}

CommunityName community_from_path(const fs::path& path) {
  CommunityName out;
  const std::string file = path.filename().string();
  if (file == "Posts.xml") {
    fs::path parent = path.parent_path();
    if (parent.filename().empty()) parent = parent.parent_path();
    out.community = strip_suffix(parent.filename().string(), ".stackexchange.com");
    if (out.community.empty()) out.community = "Posts";
    return out;
  }
  std::string stem = file;
  for (std::string_view ext : {".tsv", ".xml", ".analysis.json"}) {
    if (ends_with(stem, ext)) {
      stem.resize(stem.size() - ext.size());
      break;
    }
  }
  const auto dot = stem.rfind(".rep");
  if (dot != std::string::npos && dot > 0) {
    const std::string_view digits = std::string_view(stem).substr(dot + 4);
    int rep = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rep);
    if (!digits.empty() && ec == std::errc() && ptr == digits.data() + digits.size()) {
      out.replicate = rep;
      stem.resize(dot);
    }
  }
  out.community = stem;
  return out;
}

CommandResult cmd_ingest(const std::vector<fs::path>& raw_inputs, const RunOptions& opts) {
  const auto inputs = expand_inputs(raw_inputs, {"Posts.xml", ".tsv"});
  CommandResult result;
  if (inputs.empty()) {
    result.warnings.push_back("no input files found; nothing ingested");
    return result;
  }
  const auto names = names_of(inputs);
  std::vector<std::vector<fs::path>> written(inputs.size());
  std::vector<std::vector<std::string>> warnings(inputs.size());
  parallel_for(inputs.size(), opts.jobs, [&](std::size_t i) {
    const std::string community = names[i].stem();
    CommunityDataset ds = load_dataset(inputs[i], community);
    BuildResult built = build_bipartite(ds);
    std::ostringstream tsv;
    write_canonical_tsv(tsv, built.graph);
    const fs::path tsv_path = opts.out_dir / (community + ".tsv");
    const fs::path summary_path = opts.out_dir / (community + ".summary.json");
    write_file_atomic(tsv_path, tsv.str());
    write_file_atomic(summary_path, summary_json(community, summarize(built.graph), ds.stats,
                                                 built.duplicate_tags, ds.issues));
    written[i] = {tsv_path, summary_path};
    if (built.graph.n_questions() == 0) warnings[i].push_back(community + ": no tagged questions");
  });
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    result.written.insert(result.written.end(), written[i].begin(), written[i].end());
    result.warnings.insert(result.warnings.end(), warnings[i].begin(), warnings[i].end());
  }
  result.communities = inputs.size();
  return result;
}

CommandResult cmd_fit(const std::vector<fs::path>& raw_inputs, const std::vector<Family>& families,
                      const RunOptions& opts) {
  if (families.empty()) throw UsageError("no distribution family selected");
  const auto inputs = expand_inputs(raw_inputs, {".tsv"});
  CommandResult result;
  if (inputs.empty()) {
    result.warnings.push_back("no input files found; nothing fitted");
    return result;
  }
  const auto names = names_of(inputs);
  std::vector<CommunityFits> fits(inputs.size());
  parallel_for(inputs.size(), opts.jobs, [&](std::size_t i) {
    const std::string community = names[i].stem();
    const auto graph = load_graph(inputs[i], community);
    const std::vector<double> values = as_doubles(graph.frequencies());
    CommunityFits& cf = fits[i];
    cf.community = community;
    cf.n = values.size();
    for (Family f : families) {
      FamilyResult fr;
      fr.family = f;
      try {
        fr.fit = fit_family(f, values);
      } catch (const Error& e) {
        fr.error = e.what();
      }
      cf.families.push_back(std::move(fr));
    }
    if (const DistributionFit* ln = cf.find(Family::kLognormal)) {
      for (Family f : families) {
        if (f == Family::kLognormal) continue;
        LikelihoodRatioEntry entry;
        entry.alternative = f;
        if (const DistributionFit* alt = cf.find(f)) {
          try {
            entry.result = likelihood_ratio_test(values, *ln, *alt);
          } catch (const Error& e) {
            entry.error = e.what();
          }
        } else {
          entry.error = "alternative fit failed";
        }
        cf.likelihood_ratios.push_back(std::move(entry));
      }
    }
    write_file_atomic(opts.out_dir / (community + ".fit.json"), fits_json(cf));
  });

  std::string csv = fits_csv_header(families);
  std::vector<DistributionFit> lognormals;
  std::vector<std::string> ln_communities;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    result.written.push_back(opts.out_dir / (fits[i].community + ".fit.json"));
    csv += fits_csv_row(fits[i], families);
    for (const auto& fr : fits[i].families) {
      if (!fr.fit) result.warnings.push_back(fits[i].community + ": " + std::string(family_name(fr.family)) + " fit failed: " + fr.error);
    }
    if (const DistributionFit* ln = fits[i].find(Family::kLognormal)) {
      lognormals.push_back(*ln);
      ln_communities.push_back(fits[i].community);
    }
  }
  write_file_atomic(opts.out_dir / "fits.csv", csv);
  result.written.push_back(opts.out_dir / "fits.csv");
  if (lognormals.size() >= 2) {
    write_file_atomic(opts.out_dir / "fit_population.json",
                      population_json(param_population(lognormals), ln_communities));
    result.written.push_back(opts.out_dir / "fit_population.json");
  }
  result.communities = inputs.size();
  return result;
}

namespace {

void write_generated(const GeneratorConfig& config, const GeneratedGraph& gen, const fs::path& tsv_path,
                     const fs::path& report_path, std::string_view community,
                     std::optional<int> replicate) {
  std::ostringstream tsv;
  write_canonical_tsv(tsv, gen.graph);
  write_file_atomic(tsv_path, tsv.str());
  write_file_atomic(report_path, generation_report_json(config, gen.report, community, replicate));
}

fs::path report_path_for(const fs::path& tsv) {
  fs::path p = tsv;
  std::string name = strip_suffix(p.filename().string(), ".tsv");
  p.replace_filename(name + ".report.json");
  return p;
}

}  // namespace

CommandResult cmd_generate(const GeneratorConfig& config, const fs::path& out_file) {
  config.validate();
  const GeneratedGraph gen = generate(config);
  const fs::path report = report_path_for(out_file);
  write_generated(config, gen, out_file, report, {}, std::nullopt);
  CommandResult result;
  result.written = {out_file, report};
  result.communities = 1;
  return result;
}

CommandResult cmd_replicate(const std::vector<fs::path>& raw_inputs, const ReplicateOptions& ropts,
                            const RunOptions& opts) {
  if (ropts.reps < 1) throw UsageError("--reps must be at least 1");
  const auto inputs = expand_inputs(raw_inputs, {".tsv"});
  CommandResult result;
  if (inputs.empty()) {
    result.warnings.push_back("no input files found; nothing replicated");
    return result;
  }
  const auto names = names_of(inputs);

  struct Source {
    GeneratorConfig base;
    std::string community;
  };
  std::vector<Source> sources(inputs.size());
  std::vector<std::string> fit_warnings(inputs.size());
  parallel_for(inputs.size(), opts.jobs, [&](std::size_t i) {
    if (names[i].replicate) throw DataError(inputs[i].string() + ": input is already a replicate");
    const std::string& community = names[i].community;
    const auto graph = load_graph(inputs[i], community);
    const fs::path fit_path = (ropts.fits_dir ? *ropts.fits_dir : inputs[i].parent_path()) /
                              (community + ".fit.json");
    LognormalParams params;
    if (fs::is_regular_file(fit_path)) {
      params = lognormal_from_fits_json(read_file(fit_path));
    } else {
      params = std::get<LognormalParams>(fit_lognormal(as_doubles(graph.frequencies())).params);
      fit_warnings[i] = community + ": no " + fit_path.string() + ", lognormal fitted from the TSV";
    }
    const GraphSummary s = summarize(graph);
    if (s.occurrences <= s.n_questions) {
      throw DataError(community + ": needs more tag occurrences than questions to replicate");
    }
    Source& src = sources[i];
    src.community = community;
    src.base.n_tags = s.n_tags;
    src.base.n_questions = s.n_questions;
    src.base.occurrences = s.occurrences;
    src.base.mu = params.mu;
    src.base.sigma = params.sigma;
    src.base.clamp_to_questions = ropts.clamp_to_questions;
  });

  const std::size_t reps = static_cast<std::size_t>(ropts.reps);
  const std::size_t total = inputs.size() * reps;
  parallel_for(total, opts.jobs, [&](std::size_t k) {
    const Source& src = sources[k / reps];
    const int rep = static_cast<int>(k % reps) + 1;
    GeneratorConfig config = src.base;
    config.seed = replicate_seed(opts.seed, src.community, static_cast<std::uint64_t>(rep));
    const GeneratedGraph gen = generate(config);
    const std::string stem = src.community + ".rep" + std::to_string(rep);
    write_generated(config, gen, opts.out_dir / (stem + ".tsv"), opts.out_dir / (stem + ".report.json"),
                    src.community, rep);
  });
  for (const auto& w : fit_warnings) {
    if (!w.empty()) result.warnings.push_back(w);
  }
  for (std::size_t k = 0; k < total; ++k) {
    const std::string stem = sources[k / reps].community + ".rep" + std::to_string(k % reps + 1);
    result.written.push_back(opts.out_dir / (stem + ".tsv"));
    result.written.push_back(opts.out_dir / (stem + ".report.json"));
  }
  result.communities = inputs.size();
  return result;
}

CommandResult cmd_analyze(const std::vector<fs::path>& raw_inputs, const AnalyzeOptions& aopts,
                          const RunOptions& opts) {
  const auto inputs = expand_inputs(raw_inputs, {".tsv"});
  CommandResult result;
  if (inputs.empty()) {
    result.warnings.push_back("no input files found; nothing analyzed");
    return result;
  }
  const auto names = names_of(inputs);
  std::vector<AnalysisReport> reports(inputs.size());
  std::vector<std::vector<fs::path>> written(inputs.size());
  parallel_for(inputs.size(), opts.jobs, [&](std::size_t i) {
    const std::string stem = names[i].stem();
    const auto graph = load_graph(inputs[i], stem);
    GraphAnalysis ga = analyze_graph(graph, names[i].community, names[i].replicate);
    const fs::path json_path = opts.out_dir / (stem + ".analysis.json");
    write_file_atomic(json_path, analysis_json(ga.report));
    written[i].push_back(json_path);
    if (aopts.write_tag_table) {
      const fs::path p = opts.out_dir / (stem + ".tags.csv");
      write_file_atomic(p, tag_table_csv(graph.tag_names(), ga.tags));
      written[i].push_back(p);
    }
    if (aopts.write_edges) {
      std::ostringstream edges;
      write_edge_csv(edges, project(graph), graph.tag_names());
      const fs::path p = opts.out_dir / (stem + ".edges.csv");
      write_file_atomic(p, edges.str());
      written[i].push_back(p);
    }
    reports[i] = std::move(ga.report);
  });
  std::string csv = analysis_csv_header();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    csv += analysis_csv_row(reports[i]);
    result.written.insert(result.written.end(), written[i].begin(), written[i].end());
    for (const auto& note : reports[i].notes) result.warnings.push_back(names[i].stem() + ": " + note);
  }
  write_file_atomic(opts.out_dir / "analysis.csv", csv);
  result.written.push_back(opts.out_dir / "analysis.csv");
  result.communities = inputs.size();
  return result;
}

CommandResult cmd_compare(const std::vector<fs::path>& data_inputs,
                          const std::vector<fs::path>& model_inputs, const RunOptions& opts) {
  auto load = [&](const std::vector<fs::path>& raw) {
    const auto files = expand_inputs(raw, {".analysis.json"});
    std::vector<AnalysisReport> reports(files.size());
    parallel_for(files.size(), opts.jobs, [&](std::size_t i) {
      try {
        reports[i] = parse_analysis_json(read_file(files[i]));
      } catch (const ParseError& e) {
        throw e.in_file(files[i].string());
      } catch (const DataError& e) {
        throw DataError(files[i].string() + ": " + e.what());
      }
    });
    return reports;
  };
  const auto data = load(data_inputs);
  const auto model = load(model_inputs);
  if (data.empty() || model.empty()) throw DataError("compare needs at least one data and one model report");
  const ComparisonRecord rec = compare_model_to_data(data, model);
  CommandResult result;
  const fs::path out = opts.out_dir / "comparison.json";
  write_file_atomic(out, comparison_json(rec));
  result.written.push_back(out);
  result.communities = rec.communities.size();
  return result;
}

}  // namespace cotagnet
