// permest: permanent estimation via determinant-type randomized estimators
// over finite-dimensional algebras, with exact oracles and a seeded
// experiment harness.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "permest/algebra.hpp"
#include "permest/estimators.hpp"
#include "permest/harness.hpp"
#include "permest/multilinear.hpp"
#include "permest/sdet.hpp"

namespace {

using namespace permest;

void require_file(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw std::invalid_argument("no such file: " + path);
}

std::string read_text_file(const std::string& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int cmd_exact(const std::string& matrix_path) {
  require_file(matrix_path);
  Matrix m = load_matrix_csv(matrix_path);
  if (!m.square()) throw std::invalid_argument("exact: matrix must be square");
  if (m.rows() > 30) throw std::invalid_argument("exact: permanent oracle is limited to n <= 30");
  double per = permanent_ryser(m);
  if (m.rows() <= 10) {
    double naive = permanent_naive(m);
    if (std::abs(naive - per) > 1e-9 * std::max(1.0, std::abs(per)))
      throw std::runtime_error("exact: permanent oracles disagree");
  }
  std::printf("per=%.17g\n", per);
  std::printf("det=%.17g\n", determinant(m));
  return 0;
}

int cmd_sdet(const std::string& input_path) {
  auto [spec, m] = algebra_matrix_from_json(read_text_file(input_path));
  AlgebraElement s = sdet(spec, m);
  std::printf("algebra=%s n=%d\nsdet=[", spec.name().c_str(), m.n);
  for (int k = 0; k < s.dim(); ++k) std::printf(k ? ", %.17g" : "%.17g", s[k]);
  std::printf("]\n");
  return 0;
}

int cmd_mixed_disc(const std::string& matrices, const std::string& parts) {
  std::vector<Matrix> ms;
  for (const std::string& path : split_csv_list(matrices)) {
    require_file(path);
    ms.push_back(load_matrix_csv(path));
  }
  if (ms.empty()) throw std::invalid_argument("mixed-disc: need at least one matrix");
  std::vector<int> k;
  for (const std::string& p : split_csv_list(parts)) k.push_back(std::stoi(p));
  double v = mixed_discriminant(ms, Composition(k));
  std::printf("mixed_discriminant=%.17g\n", v);
  return 0;
}

int cmd_estimate(const ExperimentConfig& config) {
  EstimateReport rep = run_experiment(config);
  std::printf("estimator=%s samples=%lld seed=%llu\n", config.estimator.c_str(),
              (long long)config.samples, (unsigned long long)config.master_seed);
  std::printf("pooled_estimate=%.17g\n", rep.pooled_estimate);
  std::printf("standard_error=%.17g\n", rep.pooled_se);
  if (rep.exact_permanent) std::printf("exact_permanent=%.17g\n", *rep.exact_permanent);
  if (rep.denominator_near_zero)
    std::printf("warning=denominator estimate within 4 SE of zero; ratio unreliable\n");
  if (!config.output.empty()) std::printf("report=%s\n", config.output.c_str());
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool pass, const std::string& detail) {
    std::printf("%-44s %s  %s\n", name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
  };
  char buf[160];

  for (const char* name : {"reals", "complexes", "quaternions", "mat2", "mat3"}) {
    AlgebraSpec spec = algebra_by_name(name);
    AssociativityReport rep = check_associativity(spec);
    std::snprintf(buf, sizeof(buf), "max violation %.3g", rep.max_violation);
    report(std::string("associativity ") + name, rep.pass, buf);
  }
  for (const char* name :
       {"gg-rademacher", "gg-real-gauss", "gg-cube-roots", "gg-complex-gauss", "gg-quaternion"}) {
    MeanCheck mc = distribution_mean_check(distribution_from_name(name), 200000, 2024);
    std::snprintf(buf, sizeof(buf), "|mean| %.3g < %.3g", std::abs(mc.mean), mc.threshold);
    report(std::string("zero-mean ") + name, mc.pass, buf);
  }
  {
    MeanCheck mc = distribution_mean_check(DistributionKind{DistKind::MatrixGaussian, 2}, 100000, 2025);
    std::snprintf(buf, sizeof(buf), "|mean| %.3g < %.3g", std::abs(mc.mean), mc.threshold);
    report("zero-mean matrix-gaussian d=2", mc.pass, buf);
  }
  for (int d : {1, 2, 4}) {
    MonteCarloValue mc = concentration_log_mc(d, 500000, 2026 + std::uint64_t(d));
    double closed = std::log(concentration_constant(d));
    bool pass = std::abs(mc.mean - closed) <= 4.0 * mc.se;
    std::snprintf(buf, sizeof(buf), "MC %.6f vs closed form %.6f (4 SE %.2g)", mc.mean, closed,
                  4.0 * mc.se);
    report("concentration constant d=" + std::to_string(d), pass, buf);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized permanent estimators via symmetrized determinants"};
  app.require_subcommand(1);

  std::string exact_matrix;
  CLI::App* exact = app.add_subcommand("exact", "Exact permanent and determinant of a CSV matrix");
  exact->add_option("--matrix", exact_matrix, "CSV matrix path")->required();

  std::string sdet_input;
  CLI::App* sdet_cmd = app.add_subcommand("sdet", "Symmetrized determinant of a matrix over an algebra");
  sdet_cmd->add_option("--input", sdet_input, "JSON file {\"algebra\", \"n\", \"layers\"}")->required();

  std::string md_matrices, md_parts;
  CLI::App* md = app.add_subcommand("mixed-disc", "Mixed discriminant of repeated matrices");
  md->add_option("--matrices", md_matrices, "comma-separated CSV paths")->required();
  md->add_option("--k", md_parts, "comma-separated multiplicities, summing to n")->required();

  ExperimentConfig est_cfg;
  est_cfg.quantiles = {0.05, 0.25, 0.5, 0.75, 0.95};
  CLI::App* est = app.add_subcommand("estimate", "Monte Carlo permanent estimate of a CSV matrix");
  est->add_option("--matrix", est_cfg.matrix_source, "CSV matrix path")->required();
  est->add_option("--estimator", est_cfg.estimator,
                  "gg-rademacher|gg-real-gauss|gg-cube-roots|gg-complex-gauss|gg-quaternion|sdet|cdet")
      ->required();
  est->add_option("--d", est_cfg.d, "algebra size for sdet/cdet (mat<d>)");
  est->add_option("--samples", est_cfg.samples, "number of samples")->required();
  est->add_option("--seed", est_cfg.master_seed, "master seed")->required();
  est->add_flag("--independent-denominator", est_cfg.independent_denominator,
                "draw fresh diagonal samples for the denominator");
  est->add_option("--workers", est_cfg.workers, "worker threads");
  est->add_option("--output", est_cfg.output, "directory for report.json/samples.csv");

  std::string experiment_config;
  CLI::App* exp = app.add_subcommand("experiment", "Run an experiment from a JSON config");
  exp->add_option("--config", experiment_config, "JSON config path")->required();

  std::string sweep_config;
  CLI::App* sw = app.add_subcommand("sweep", "Concentration sweep over (d, n) cells");
  sw->add_option("--config", sweep_config, "JSON config path")->required();

  app.add_subcommand("selftest", "Built-in distribution and constant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a validation error
  }

  try {
    if (exact->parsed()) return cmd_exact(exact_matrix);
    if (sdet_cmd->parsed()) return cmd_sdet(sdet_input);
    if (md->parsed()) return cmd_mixed_disc(md_matrices, md_parts);
    if (est->parsed()) return cmd_estimate(est_cfg);
    if (exp->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_json_file(experiment_config);
      EstimateReport rep = run_experiment(cfg);
      std::printf("pooled_estimate=%.17g\n", rep.pooled_estimate);
      std::printf("standard_error=%.17g\n", rep.pooled_se);
      if (rep.exact_permanent) std::printf("exact_permanent=%.17g\n", *rep.exact_permanent);
      if (!cfg.output.empty()) std::printf("report=%s\n", cfg.output.c_str());
      return 0;
    }
    if (sw->parsed()) {
      SweepConfig cfg = SweepConfig::from_json_file(sweep_config);
      SweepSummary summary = sweep(cfg);
      std::fputs(summary.to_table_text().c_str(), stdout);
      if (!cfg.output.empty()) std::printf("summary=%s/summary.json\n", cfg.output.c_str());
      return 0;
    }
    return cmd_selftest();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
