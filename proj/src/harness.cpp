#include "permest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "permest/stats.hpp"

namespace permest {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool parse_bernoulli(const std::string& s, double* p) {
  if (s.rfind("bernoulli(", 0) != 0 || s.back() != ')') return false;
  std::string inner = s.substr(10, s.size() - 11);
  try {
    std::size_t pos = 0;
    double v = std::stod(inner, &pos);
    if (pos != inner.size()) return false;
    *p = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool is_generator_family(const std::string& source) {
  double p = 0.0;
  return source == "identity" || source == "all_ones" || source == "uniform01" ||
         source == "diagonal_ramp" || parse_bernoulli(source, &p);
}

Matrix generate_matrix(const std::string& family, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_matrix: n >= 1 required");
  if (family == "identity") return Matrix::identity(n);
  if (family == "all_ones") return Matrix(n, n, 1.0);
  if (family == "diagonal_ramp") {
    Matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = double(i + 1);
    return m;
  }
  if (family == "uniform01") {
    SampleStream g(seed, 0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g.uniform01();
    return m;
  }
  double p = 0.0;
  if (parse_bernoulli(family, &p)) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("generate_matrix: bernoulli probability must be in [0,1]");
    SampleStream g(seed, 0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = (g.uniform01() < p) ? 1.0 : 0.0;
    return m;
  }
  throw std::invalid_argument("generate_matrix: unknown family '" + family + "'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  ExperimentConfig c;
  c.matrix_source = j.value("matrix_source", std::string());
  c.n = j.value("n", 0);
  c.estimator = j.value("estimator", std::string());
  c.d = j.value("d", 1);
  c.samples = j.value("samples", std::int64_t(0));
  c.master_seed = j.value("master_seed", std::uint64_t(0));
  c.matrix_seed = j.contains("matrix_seed") ? j.at("matrix_seed").get<std::uint64_t>() : c.master_seed;
  c.output = j.value("output", std::string());
  if (j.contains("quantiles")) c.quantiles = j.at("quantiles").get<std::vector<double>>();
  c.workers = j.value("workers", 1);
  c.independent_denominator = j.value("independent_denominator", false);
  c.bootstrap = j.value("bootstrap", false);
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::ordered_json j;
  j["matrix_source"] = matrix_source;
  j["n"] = n;
  j["estimator"] = estimator;
  j["d"] = d;
  j["samples"] = samples;
  j["master_seed"] = master_seed;
  j["matrix_seed"] = matrix_seed;
  j["output"] = output;
  j["quantiles"] = quantiles;
  j["workers"] = workers;
  j["independent_denominator"] = independent_denominator;
  j["bootstrap"] = bootstrap;
  return j.dump(2);
}

namespace {

bool is_gg_kind(const std::string& estimator) {
  return estimator.rfind("gg-", 0) == 0;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.matrix_source.empty()) throw std::invalid_argument("config: matrix_source is required");
  if (is_generator_family(c.matrix_source)) {
    if (c.n < 1) throw std::invalid_argument("config: n >= 1 required for generator families");
    double p = 0.0;
    if (parse_bernoulli(c.matrix_source, &p) && (p < 0.0 || p > 1.0))
      throw std::invalid_argument("config: bernoulli probability must be in [0,1]");
  } else if (!std::filesystem::exists(c.matrix_source)) {
    throw std::invalid_argument("config: matrix_source '" + c.matrix_source +
                                "' is neither a generator family nor an existing file");
  }
  if (c.samples < 1) throw std::invalid_argument("config: samples >= 1 required");
  if (c.estimator != "sdet" && c.estimator != "cdet" && !is_gg_kind(c.estimator))
    throw std::invalid_argument("config: estimator must be one of gg-rademacher, gg-real-gauss, "
                                "gg-cube-roots, gg-complex-gauss, gg-quaternion, sdet, cdet");
  if (is_gg_kind(c.estimator)) distribution_from_name(c.estimator);  // throws on bad name
  if (c.estimator == "sdet" && (c.d < 1 || c.d > 3))
    throw std::invalid_argument("config: sdet needs d in 1..3 (cost grows as n^(d^2+3))");
  if (c.estimator == "cdet" && (c.d < 1 || c.d > 8))
    throw std::invalid_argument("config: cdet needs d in 1..8");
  if (c.workers < 1 || c.workers > 256) throw std::invalid_argument("config: workers must be in 1..256");
  for (double q : c.quantiles)
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("config: quantiles must lie in [0,1]");
}

Matrix resolve_matrix(const ExperimentConfig& c) {
  Matrix m;
  if (is_generator_family(c.matrix_source)) {
    m = generate_matrix(c.matrix_source, c.n, c.matrix_seed);
  } else {
    m = load_matrix_csv(c.matrix_source);
    if (!m.square()) throw std::invalid_argument("config: matrix file must hold a square matrix");
    if (c.n > 0 && m.rows() != c.n)
      throw std::invalid_argument("config: matrix file is " + std::to_string(m.rows()) +
                                  "x" + std::to_string(m.rows()) + " but n=" + std::to_string(c.n));
  }
  for (double v : m.data())
    if (v < 0.0 || !std::isfinite(v))
      throw std::invalid_argument("config: estimator inputs must be non-negative and finite");
  return m;
}

namespace {

// Runs fn(s) for s in [0, n) on `workers` threads; each result lands in its
// own slot, so the assignment of samples to threads cannot affect anything.
template <class Fn>
void parallel_samples(std::int64_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (std::int64_t s = 0; s < n; ++s) fn(s);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    constexpr std::int64_t kChunk = 64;
    for (;;) {
      std::int64_t lo = next.fetch_add(kChunk);
      if (lo >= n) return;
      std::int64_t hi = std::min(lo + kChunk, n);
      try {
        for (std::int64_t s = lo; s < hi; ++s) fn(s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

EstimateReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  EstimateReport rep;
  rep.config = config;

  auto t0 = Clock::now();
  Matrix a = resolve_matrix(config);
  int n = a.rows();
  rep.n = n;
  rep.timings_ms["matrix"] = ms_since(t0);

  t0 = Clock::now();
  if (n <= 10) {
    double naive = permanent_naive(a);
    double ryser = permanent_ryser(a);
    if (std::abs(naive - ryser) > 1e-9 * std::max(1.0, std::abs(ryser)))
      throw std::runtime_error("permanent oracles disagree: naive=" + fmt17(naive) +
                               " ryser=" + fmt17(ryser));
    rep.exact_permanent = ryser;
  } else if (n <= 30) {
    rep.exact_permanent = permanent_ryser(a);
  }
  rep.timings_ms["exact_oracle"] = ms_since(t0);

  // Everything the sampler reuses across draws is built once, up front.
  t0 = Clock::now();
  std::function<EstimatorSample(std::uint64_t)> draw;
  std::unique_ptr<SdetEstimator> sdet_est;
  if (config.estimator == "sdet") {
    sdet_est = std::make_unique<SdetEstimator>(n, config.d);
    const SdetEstimator* est = sdet_est.get();
    bool indep = config.independent_denominator;
    draw = [&a, est, indep](std::uint64_t seed) { return est->sample(a, seed, indep); };
  } else if (config.estimator == "cdet") {
    int d = config.d;
    draw = [&a, d](std::uint64_t seed) { return cdet_estimate(a, d, seed); };
  } else {
    DistributionKind kind = distribution_from_name(config.estimator);
    draw = [&a, kind](std::uint64_t seed) { return gg_estimate(a, kind, seed); };
  }
  rep.timings_ms["estimator_setup"] = ms_since(t0);

  t0 = Clock::now();
  std::int64_t nsamples = config.samples;
  rep.samples.resize(std::size_t(nsamples));
  SampleRecord* out = rep.samples.data();
  std::uint64_t master = config.master_seed;
  parallel_samples(nsamples, config.workers, [&](std::int64_t s) {
    std::uint64_t seed = sample_seed(master, std::uint64_t(s));
    EstimatorSample es = draw(seed);
    out[s] = {s, seed, es.numerator, es.denominator, es.alpha};
  });
  rep.timings_ms["sampling"] = ms_since(t0);

  // Statistics reduce sequentially by sample index; this is what makes the
  // report independent of the worker count.
  t0 = Clock::now();
  const std::size_t count = rep.samples.size();
  std::vector<double> nums(count), dens(count), alphas(count);
  for (std::int64_t s = 0; s < nsamples; ++s) {
    nums[std::size_t(s)] = rep.samples[std::size_t(s)].numerator;
    dens[std::size_t(s)] = rep.samples[std::size_t(s)].denominator;
    alphas[std::size_t(s)] = rep.samples[std::size_t(s)].alpha;
  }
  RatioEstimate ratio = pooled_ratio(nums, dens);
  rep.numerator_sum = ratio.numerator_sum;
  rep.denominator_sum = ratio.denominator_sum;
  rep.pooled_estimate = ratio.estimate;
  rep.pooled_se = ratio.se;
  MeanSe den_ms = mean_and_se(dens);
  rep.denominator_near_zero = den_ms.mean < 4.0 * den_ms.se;

  MeanSe alpha_ms = mean_and_se(alphas);
  rep.alpha_mean = alpha_ms.mean;
  rep.alpha_variance = sample_variance(alphas);
  rep.zero_alpha_count = std::int64_t(std::count(alphas.begin(), alphas.end(), 0.0));

  if (!config.quantiles.empty()) {
    std::vector<double> sorted = alphas;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> qs = config.quantiles;
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    for (double q : qs) rep.alpha_quantiles.push_back({q, quantile_sorted(sorted, q)});
  }

  if (rep.exact_permanent && *rep.exact_permanent > 0.0) {
    // Per-coordinate log ratio (1/n) ln(alpha/per), over positive alphas.
    std::vector<double> lr;
    lr.reserve(std::size_t(nsamples));
    for (double alpha : alphas)
      if (alpha > 0.0) lr.push_back(std::log(alpha / *rep.exact_permanent) / double(n));
    if (!lr.empty()) {
      LogRatioStats ls;
      ls.mean = mean_and_se(lr).mean;
      ls.variance = sample_variance(lr);
      ls.samples_used = std::int64_t(lr.size());
      rep.log_ratio = ls;
    }
  }

  if (config.bootstrap && nsamples >= 2) {
    // B=1000 resamples of the pooled ratio, seeded from the master seed.
    constexpr int kResamples = 1000;
    std::vector<double> boots(kResamples);
    for (int bidx = 0; bidx < kResamples; ++bidx) {
      SampleStream g(splitmix_mix(master ^ 0xB007B007B007B007ull), std::uint64_t(bidx));
      CompensatedSum bx, by;
      for (std::int64_t s = 0; s < nsamples; ++s) {
        std::int64_t pick = std::int64_t(g.uniform01() * double(nsamples));
        bx.add(nums[std::size_t(pick)]);
        by.add(dens[std::size_t(pick)]);
      }
      boots[std::size_t(bidx)] = bx.value() / by.value();
    }
    rep.bootstrap_se = std::sqrt(sample_variance(boots));
  }
  rep.timings_ms["statistics"] = ms_since(t0);

  if (!config.output.empty()) {
    t0 = Clock::now();
    write_report(rep, config.output);
    rep.timings_ms["write"] = ms_since(t0);
  }
  return rep;
}

std::string EstimateReport::to_json_text() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  // The echo identifies the experiment. Execution details (worker count,
  // output location) stay out so they cannot break byte-identity.
  nlohmann::ordered_json echo;
  echo["matrix_source"] = config.matrix_source;
  echo["n"] = config.n;
  echo["estimator"] = config.estimator;
  echo["d"] = config.d;
  echo["samples"] = config.samples;
  echo["master_seed"] = config.master_seed;
  echo["matrix_seed"] = config.matrix_seed;
  echo["quantiles"] = config.quantiles;
  echo["independent_denominator"] = config.independent_denominator;
  echo["bootstrap"] = config.bootstrap;
  j["config"] = echo;
  j["n"] = n;
  if (exact_permanent) j["exact_permanent"] = *exact_permanent;
  nlohmann::ordered_json pooled;
  pooled["numerator_sum"] = numerator_sum;
  pooled["denominator_sum"] = denominator_sum;
  pooled["estimate"] = pooled_estimate;
  pooled["standard_error"] = pooled_se;
  pooled["denominator_near_zero"] = denominator_near_zero;
  if (bootstrap_se) pooled["bootstrap_standard_error"] = *bootstrap_se;
  j["pooled"] = pooled;
  nlohmann::ordered_json alpha;
  alpha["mean"] = alpha_mean;
  alpha["variance"] = alpha_variance;
  alpha["zero_count"] = zero_alpha_count;
  if (!alpha_quantiles.empty()) {
    nlohmann::ordered_json qs = nlohmann::ordered_json::array();
    for (const QuantilePoint& qp : alpha_quantiles) {
      nlohmann::ordered_json o;
      o["q"] = qp.q;
      o["value"] = qp.value;
      qs.push_back(o);
    }
    alpha["quantiles"] = qs;
  }
  j["alpha"] = alpha;
  if (log_ratio) {
    nlohmann::ordered_json lr;
    lr["mean"] = log_ratio->mean;
    lr["variance"] = log_ratio->variance;
    lr["samples_used"] = log_ratio->samples_used;
    j["log_ratio"] = lr;
  }
  j["samples"] = std::int64_t(samples.size());
  return j.dump(2) + "\n";
}

void write_report(const EstimateReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/report.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/report.json");
    out << report.to_json_text();
  }
  {
    std::ofstream out(dir + "/samples.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/samples.csv");
    out << "sample_index,seed,numerator,denominator,alpha\n";
    char buf[160];
    for (const SampleRecord& s : report.samples) {
      std::snprintf(buf, sizeof(buf), "%lld,%llu,%.17g,%.17g,%.17g\n",
                    (long long)s.index, (unsigned long long)s.seed, s.numerator, s.denominator,
                    s.alpha);
      out << buf;
    }
  }
  {
    // Wall-clock data lives apart from the deterministic report so that
    // byte-identity checks can cover report.json and samples.csv whole.
    nlohmann::ordered_json j;
    j["schema"] = 1;
    nlohmann::ordered_json stages;
    for (const auto& [k, v] : report.timings_ms) stages[k] = v;
    j["stages_ms"] = stages;
    std::ofstream out(dir + "/timings.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/timings.json");
    out << j.dump(2) << "\n";
  }
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("sweep config: JSON parse error: ") + e.what());
  }
  SweepConfig c;
  if (j.contains("d")) c.d_values = j.at("d").get<std::vector<int>>();
  if (j.contains("n")) c.n_values = j.at("n").get<std::vector<int>>();
  c.matrix_source = j.value("matrix_source", std::string("all_ones"));
  c.samples = j.value("samples", std::int64_t(0));
  c.master_seed = j.value("master_seed", std::uint64_t(0));
  c.matrix_seed = j.contains("matrix_seed") ? j.at("matrix_seed").get<std::uint64_t>() : c.master_seed;
  c.output = j.value("output", std::string());
  c.workers = j.value("workers", 1);
  return c;
}

SweepConfig SweepConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

namespace {

// The d-th estimator costs about n^(d^2+3) work per sample; cells past this
// budget are skipped, not attempted.
bool sweep_cell_feasible(int d, int n, std::string* why) {
  if (d < 1 || n < 1) {
    *why = "d and n must be positive";
    return false;
  }
  if (d > 3) {
    *why = "d > 3 exceeds the sdet size guard";
    return false;
  }
  if (std::pow(double(n), double(d * d + 3)) > 5e9) {
    *why = "estimated cost n^(d^2+3) over budget";
    return false;
  }
  return true;
}

}  // namespace

SweepSummary sweep(const SweepConfig& config) {
  if (config.d_values.empty() || config.n_values.empty())
    throw std::invalid_argument("sweep: need at least one d and one n");
  if (config.samples < 1) throw std::invalid_argument("sweep: samples >= 1 required");
  SweepSummary summary;
  summary.config = config;
  for (int d : config.d_values) {
    for (int n : config.n_values) {
      SweepCell cell;
      cell.d = d;
      cell.n = n;
      std::string why;
      if (!sweep_cell_feasible(d, n, &why)) {
        cell.skipped = true;
        cell.note = why;
        summary.cells.push_back(cell);
        continue;
      }
      ExperimentConfig ec;
      ec.matrix_source = config.matrix_source;
      ec.n = n;
      ec.estimator = "sdet";
      ec.d = d;
      ec.samples = config.samples;
      // Every cell gets its own master seed, derived deterministically.
      ec.master_seed = sample_seed(config.master_seed, (std::uint64_t(d) << 32) | std::uint64_t(n));
      ec.matrix_seed = config.matrix_seed;
      ec.workers = config.workers;
      if (!config.output.empty())
        ec.output = config.output + "/d" + std::to_string(d) + "_n" + std::to_string(n);
      EstimateReport rep = run_experiment(ec);
      if (!rep.exact_permanent || *rep.exact_permanent <= 0.0) {
        cell.skipped = true;
        cell.note = "exact permanent unavailable or zero; root-ratio undefined";
        summary.cells.push_back(cell);
        continue;
      }
      cell.samples = std::int64_t(rep.samples.size());
      cell.exact_permanent = *rep.exact_permanent;
      std::vector<double> roots;
      roots.reserve(rep.samples.size());
      for (const SampleRecord& s : rep.samples)
        roots.push_back(std::pow(s.alpha / *rep.exact_permanent, 1.0 / double(n)));
      std::sort(roots.begin(), roots.end());
      cell.median_root_ratio = quantile_sorted(roots, 0.5);
      cell.q25_root_ratio = quantile_sorted(roots, 0.25);
      cell.q75_root_ratio = quantile_sorted(roots, 0.75);
      summary.cells.push_back(cell);
    }
  }
  if (!config.output.empty()) {
    std::filesystem::create_directories(config.output);
    std::ofstream out(config.output + "/summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write sweep summary");
    out << summary.to_json_text();
  }
  return summary;
}

std::string SweepSummary::to_json_text() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["matrix_source"] = config.matrix_source;
  j["samples"] = config.samples;
  j["master_seed"] = config.master_seed;
  nlohmann::ordered_json cells_json = nlohmann::ordered_json::array();
  for (const SweepCell& c : cells) {
    nlohmann::ordered_json o;
    o["d"] = c.d;
    o["n"] = c.n;
    if (c.skipped) {
      o["skipped"] = true;
      o["note"] = c.note;
    } else {
      o["samples"] = c.samples;
      o["exact_permanent"] = c.exact_permanent;
      o["median_root_ratio"] = c.median_root_ratio;
      o["q25_root_ratio"] = c.q25_root_ratio;
      o["q75_root_ratio"] = c.q75_root_ratio;
    }
    cells_json.push_back(o);
  }
  j["cells"] = cells_json;
  return j.dump(2) + "\n";
}

std::string SweepSummary::to_table_text() const {
  std::string out = "  d   n   median (alpha/per)^(1/n)   IQR [q25, q75]\n";
  char buf[160];
  for (const SweepCell& c : cells) {
    if (c.skipped) {
      std::snprintf(buf, sizeof(buf), "%3d %3d   skipped: %s\n", c.d, c.n, c.note.c_str());
    } else {
      std::snprintf(buf, sizeof(buf), "%3d %3d   %-24.6g   [%.6g, %.6g]\n", c.d, c.n,
                    c.median_root_ratio, c.q25_root_ratio, c.q75_root_ratio);
    }
    out += buf;
  }
  return out;
}

}  // namespace permest
