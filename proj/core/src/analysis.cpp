#include "cotagnet/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <set>

#include "cotagnet/distfit.hpp"
#include "cotagnet/error.hpp"

namespace cotagnet {
namespace {

// Below this many factors the falling-factorial ratio is summed directly.
constexpr std::uint64_t kDirectProductLimit = 64;

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

LinearFit linear_cotag_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("regression: x and y differ in length");
  if (x.size() < 3) throw DataError("regression needs at least 3 points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw NumericError("regression: zero variance in x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double expected_weighted_cotags(std::span<const std::uint64_t> x, TagId t, std::uint64_t n_hat) {
  if (t >= x.size()) throw DataError("expected_weighted_cotags: unknown tag id");
  if (n_hat < 1) throw DataError("expected_weighted_cotags: n_hat must be >= 1");
  const std::uint64_t m = std::accumulate(x.begin(), x.end(), std::uint64_t{0});
  const auto xt = static_cast<double>(x[t]);
  return (static_cast<double>(m) - xt) * xt / static_cast<double>(n_hat);
}

double disjoint_probability(std::uint64_t n, std::uint64_t a, std::uint64_t b) {
  if (a > n || b > n) throw DataError("disjoint_probability: subset larger than ground set");
  if (a == 0 || b == 0) return 1.0;
  if (a + b > n) return 0.0;
  const std::uint64_t k = std::min(a, b);
  const std::uint64_t big = std::max(a, b);
  // C(n - big, k) / C(n, k) = prod_{j<k} (n - big - j) / (n - j)
  if (k <= kDirectProductLimit) {
    double ratio = 1.0;
    for (std::uint64_t j = 0; j < k; ++j) {
      ratio *= static_cast<double>(n - big - j) / static_cast<double>(n - j);
    }
    return ratio;
  }
  // Extended precision keeps the cancellation error of the log-gamma
  // differences far below 1e-10 for n up to ~1e7.
  const auto ln = static_cast<long double>(n);
  const auto lbig = static_cast<long double>(big);
  const auto lk = static_cast<long double>(k);
  using boost::math::lgamma;
  const long double log_ratio = lgamma(ln - lbig + 1.0L) - lgamma(ln - lbig - lk + 1.0L) -
                                lgamma(ln + 1.0L) + lgamma(ln - lk + 1.0L);
  return static_cast<double>(std::exp(log_ratio));
}

double expected_unique_cotags(std::span<const std::uint64_t> x, TagId t, std::uint64_t n_hat) {
  if (t >= x.size()) throw DataError("expected_unique_cotags: unknown tag id");
  double sum = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (s == t) continue;
    if (x[s] > n_hat || x[t] > n_hat) {
      throw DataError("expected_unique_cotags: frequency exceeds n_hat");
    }
    sum += std::clamp(1.0 - disjoint_probability(n_hat, x[s], x[t]), 0.0, 1.0);
  }
  return sum;
}

PolyLogFit poly_log_fit(std::span<const double> x, std::span<const double> d, int degree) {
  if (x.size() != d.size()) throw DataError("polynomial fit: x and d differ in length");
  if (degree < 0) throw UsageError("polynomial fit: negative degree");
  if (x.size() < static_cast<std::size_t>(degree) + 1) {
    throw DataError("polynomial fit: need at least " + std::to_string(degree + 1) + " points");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd lx(n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] < 0.0 || d[i] < 0.0) throw DataError("polynomial fit: negative input");
    lx(i) = std::log1p(x[i]);
    y(i) = std::log1p(d[i]);
  }
  const std::size_t distinct = std::set<double>(x.begin(), x.end()).size();

  PolyLogFit fit;
  fit.requested_degree = degree;
  fit.n = x.size();
  int deg = std::min<int>(degree, static_cast<int>(distinct) - 1);
  while (true) {
    Eigen::MatrixXd design(n, deg + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      double p = 1.0;
      for (int j = 0; j <= deg; ++j) {
        design(i, j) = p;
        p *= lx(i);
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < deg + 1 && deg > 0) {
      --deg;
      continue;
    }
    const Eigen::VectorXd coef = qr.solve(y);
    fit.coeffs.assign(coef.data(), coef.data() + coef.size());
    const Eigen::VectorXd residual = y - design * coef;
    fit.mse = residual.squaredNorm() / static_cast<double>(n);
    break;
  }
  fit.degree = deg;
  fit.rank_deficient = deg < degree;
  return fit;
}

PolyLogFit cubic_log_fit(std::span<const double> x, std::span<const double> d) {
  if (x.size() < 5) throw DataError("cubic fit needs at least 5 points");
  return poly_log_fit(x, d, 3);
}

PcaSummary pca_explained_variance(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw DataError("PCA needs at least 2 rows");
  const auto cols = static_cast<Eigen::Index>(rows.front().size());
  if (cols == 0) throw DataError("PCA rows are empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != cols) {
      throw DataError("PCA rows differ in length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = rows[r][c];
  }
  const Eigen::RowVectorXd mean = m.colwise().mean();
  const Eigen::MatrixXd centred = m.rowwise() - mean;
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(m.rows() - 1);
  const double trace = cov.trace();
  if (!(trace > 0.0)) throw NumericError("PCA: zero variance");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  std::vector<double> values(eig.eigenvalues().data(),
                             eig.eigenvalues().data() + eig.eigenvalues().size());
  for (double& v : values) v = std::max(v, 0.0);
  std::sort(values.begin(), values.end(), std::greater<>());
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  PcaSummary out;
  for (double v : values) out.explained_variance_ratios.push_back(v / total);
  return out;
}

GraphAnalysis analyze_graph(const BipartiteTagGraph& graph, std::string community,
                            std::optional<int> replicate) {
  GraphAnalysis out;
  AnalysisReport& r = out.report;
  r.community = std::move(community);
  r.replicate = replicate;
  r.n_tags = graph.n_tags();
  r.n_questions = graph.n_questions();
  r.occurrences = graph.occurrences();

  TagTable& tab = out.tags;
  tab.frequency = graph.frequencies();
  const CotagGraph cotag = project(graph);
  std::vector<double> x;
  std::vector<double> k;
  std::vector<double> d;
  for (TagId t = 0; t < graph.n_tags(); ++t) {
    tab.weighted_degree.push_back(weighted_degree(cotag, t));
    tab.unweighted_degree.push_back(unweighted_degree(cotag, t));
    x.push_back(static_cast<double>(tab.frequency[t]));
    k.push_back(static_cast<double>(tab.weighted_degree[t]));
    d.push_back(static_cast<double>(tab.unweighted_degree[t]));
  }

  auto attempt = [&r](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      r.notes.push_back(std::string(section) + ": " + e.what());
    }
  };

  attempt("lognormal", [&] {
    const DistributionFit fit = fit_lognormal(x);
    const auto& p = std::get<LognormalParams>(fit.params);
    r.lognormal = AnalysisReport::Lognormal{p.mu, p.sigma, fit.ks_statistic};
  });
  attempt("linear", [&] { r.linear = linear_cotag_regression(x, k); });
  attempt("cubic", [&] {
    r.cubic = cubic_log_fit(x, d);
    r.linear_log_mse = poly_log_fit(x, d, 1).mse;
  });
  attempt("clustering", [&] { r.clustering = clustering_report(cotag); });
  attempt("tags_per_question", [&] { r.tags_per_question = tags_per_question_distribution(graph); });
  attempt("expectations", [&] {
    const std::uint64_t n_hat = solve_corrected_questions(r.occurrences, r.n_questions);
    r.corrected_questions = n_hat;
    const std::uint64_t max_x =
        tab.frequency.empty() ? 0 : *std::max_element(tab.frequency.begin(), tab.frequency.end());
    if (max_x > n_hat) throw DataError("a tag frequency exceeds the corrected question count");
    double err = 0.0;
    double abs_err = 0.0;
    for (TagId t = 0; t < graph.n_tags(); ++t) {
      tab.expected_weighted.push_back(expected_weighted_cotags(tab.frequency, t, n_hat));
      tab.expected_unique.push_back(expected_unique_cotags(tab.frequency, t, n_hat));
      const double e = tab.expected_unique.back() - d[t];
      err += e;
      abs_err += std::fabs(e);
    }
    if (graph.n_tags() > 0) {
      r.unique_cotag_mean_error = err / static_cast<double>(graph.n_tags());
      r.unique_cotag_mean_abs_error = abs_err / static_cast<double>(graph.n_tags());
    }
  });
  return out;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) return std::nullopt;
  if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
  if (a.size() < 2) return std::nullopt;
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

using MetricMap = std::map<std::string, double>;

const char* const kBucketNames[6] = {"tpq_1", "tpq_2", "tpq_3", "tpq_4", "tpq_5", "tpq_gt5"};

MetricMap metrics_of(const AnalysisReport& r) {
  MetricMap m;
  if (r.lognormal) {
    m["lognormal_mu"] = r.lognormal->mu;
    m["lognormal_sigma"] = r.lognormal->sigma;
    m["lognormal_ks"] = r.lognormal->ks;
  }
  if (r.linear) {
    m["linear_slope"] = r.linear->slope;
    m["linear_r2"] = r.linear->r_squared;
  }
  if (r.cubic) m["cubic_mse"] = r.cubic->mse;
  if (r.clustering) {
    m["clustering_C"] = r.clustering->c_unweighted;
    if (std::isfinite(r.clustering->log_c_weighted)) m["clustering_logCw"] = r.clustering->log_c_weighted;
    m["clustering_Clw"] = r.clustering->c_logweighted;
  }
  if (r.unique_cotag_mean_error) m["unique_cotag_mean_error"] = *r.unique_cotag_mean_error;
  if (r.n_questions > 0) {
    for (int i = 0; i < 6; ++i) m[kBucketNames[i]] = r.tags_per_question[i];
  }
  return m;
}

struct CommunityAggregate {
  MetricMap metrics;
  std::optional<std::vector<double>> cubic_coeffs;
};

std::map<std::string, CommunityAggregate> aggregate(std::span<const AnalysisReport> reports) {
  std::map<std::string, std::vector<const AnalysisReport*>> groups;
  for (const auto& r : reports) groups[r.community].push_back(&r);
  std::map<std::string, CommunityAggregate> out;
  for (const auto& [name, members] : groups) {
    std::map<std::string, std::pair<double, std::size_t>> sums;
    std::vector<double> coeff_sum(4, 0.0);
    std::size_t n_coeff = 0;
    for (const AnalysisReport* r : members) {
      for (const auto& [key, value] : metrics_of(*r)) {
        sums[key].first += value;
        ++sums[key].second;
      }
      if (r->cubic && r->cubic->degree == 3) {
        for (int i = 0; i < 4; ++i) coeff_sum[i] += r->cubic->coeffs[i];
        ++n_coeff;
      }
    }
    CommunityAggregate agg;
    for (const auto& [key, sum] : sums) agg.metrics[key] = sum.first / static_cast<double>(sum.second);
    if (n_coeff > 0) {
      for (double& c : coeff_sum) c /= static_cast<double>(n_coeff);
      agg.cubic_coeffs = coeff_sum;
    }
    out.emplace(name, std::move(agg));
  }
  return out;
}

std::optional<PcaSummary> try_pca(const std::map<std::string, CommunityAggregate>& side) {
  std::vector<std::vector<double>> rows;
  for (const auto& [name, agg] : side) {
    if (agg.cubic_coeffs) rows.push_back(*agg.cubic_coeffs);
  }
  if (rows.size() < 2) return std::nullopt;
  try {
    return pca_explained_variance(rows);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

ComparisonRecord compare_model_to_data(std::span<const AnalysisReport> data,
                                       std::span<const AnalysisReport> model) {
  const auto data_side = aggregate(data);
  const auto model_side = aggregate(model);
  std::vector<std::string> data_names;
  std::vector<std::string> model_names;
  for (const auto& [name, agg] : data_side) data_names.push_back(name);
  for (const auto& [name, agg] : model_side) model_names.push_back(name);
  if (data_names != model_names) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(data_names.begin(), data_names.end(), model_names.begin(),
                                  model_names.end(), std::back_inserter(diff));
    throw DataError("compare: community lists differ (e.g. '" + diff.front() + "')");
  }
  if (data_names.empty()) throw DataError("compare: no communities");

  ComparisonRecord rec;
  rec.communities = data_names;
  std::set<std::string> keys;
  for (const auto& [name, agg] : data_side) {
    for (const auto& [key, v] : agg.metrics) keys.insert(key);
  }
  auto compare_key = [&](const std::vector<std::string>& metric_keys) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& name : data_names) {
      const auto& dm = data_side.at(name).metrics;
      const auto& mm = model_side.at(name).metrics;
      for (const auto& key : metric_keys) {
        const auto di = dm.find(key);
        const auto mi = mm.find(key);
        if (di == dm.end() || mi == mm.end()) continue;
        a.push_back(di->second);
        b.push_back(mi->second);
      }
    }
    MetricComparison mc;
    mc.n = a.size();
    if (a.empty()) return mc;
    mc.correlation = pearson(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) mc.mse += (a[i] - b[i]) * (a[i] - b[i]);
    mc.mse /= static_cast<double>(a.size());
    return mc;
  };
  for (const auto& key : keys) {
    const MetricComparison mc = compare_key({key});
    if (mc.n > 0) rec.metrics[key] = mc;
  }
  const MetricComparison pooled =
      compare_key(std::vector<std::string>(std::begin(kBucketNames), std::end(kBucketNames)));
  if (pooled.n > 0) rec.metrics["tags_per_question_pooled"] = pooled;

  auto means = [&](const std::map<std::string, CommunityAggregate>& side) {
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const auto& [name, agg] : side) {
      for (const auto& [key, v] : agg.metrics) {
        sums[key].first += v;
        ++sums[key].second;
      }
    }
    std::map<std::string, double> out;
    for (const auto& [key, s] : sums) out[key] = s.first / static_cast<double>(s.second);
    return out;
  };
  rec.data_means = means(data_side);
  rec.model_means = means(model_side);
  rec.pca_data = try_pca(data_side);
  rec.pca_model = try_pca(model_side);
  return rec;
}

}  // namespace cotagnet
