#include "srp/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "srp/accept.hpp"
#include "srp/errors.hpp"
#include "srp/genfun.hpp"
#include "srp/limits.hpp"
#include "srp/partition.hpp"
#include "srp/sampler.hpp"
#include "srp/stats.hpp"

namespace srp {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct FileWriter {
  std::ofstream out;
  explicit FileWriter(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw config_error("runner: cannot write " + path);
  }
};

ModelParams build_params(const ExperimentConfig& cfg) {
  JumpDensity den = cfg.density.build();
  if (den.dim() != cfg.dim)
    throw config_error("runner: density dimension disagrees with model.d");
  return ModelParams::with_side(std::move(den), cfg.theta, cfg.resolved_side(), cfg.particles);
}

std::string artifact_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / (cfg.prefix + "_" + name)).string();
}

void run_weights(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  WeightTable wt = make_weight_table(params);
  std::string path = artifact_path(cfg, "weights.csv");
  FileWriter f(path);
  f.out << "j,w\n";
  for (std::int64_t j = 1; j <= wt.size(); ++j)
    f.out << j << "," << fmt(wt.at(j)) << "\n";
  report.artifacts.push_back(path);
}

void run_partition(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  WeightTable wt = make_weight_table(params);
  PartitionTable pt = make_partition_table(wt);
  std::string path = artifact_path(cfg, "partition.csv");
  FileWriter f(path);
  f.out << "n,log_h\n";
  for (std::int64_t n = 0; n <= pt.size(); ++n)
    f.out << n << "," << fmt(pt.at(n)) << "\n";
  report.artifacts.push_back(path);
}

void run_pmf(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  WeightTable wt = make_weight_table(params);
  PartitionTable pt = make_partition_table(wt);
  std::vector<double> pmf = first_cycle_pmf(wt, pt, params.particles);
  report.constants.emplace_back("macro_fraction", macro_fraction(pmf, cfg.epsilon));
  std::int64_t limit = cfg.pmf_prefix > 0
                           ? std::min<std::int64_t>(cfg.pmf_prefix, params.particles)
                           : params.particles;
  std::string path = artifact_path(cfg, "pmf.csv");
  FileWriter f(path);
  f.out << "j,p\n";
  for (std::int64_t j = 1; j <= limit; ++j)
    f.out << j << "," << fmt(pmf[static_cast<size_t>(j - 1)]) << "\n";
  report.artifacts.push_back(path);
}

void run_sample(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  WeightTable wt = make_weight_table(params);
  PartitionTable pt = make_partition_table(wt);

  std::vector<CycleSample> samples(static_cast<size_t>(cfg.replicas));
  parallel_for_chunks(cfg.replicas, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t r = b; r < e; ++r) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
      samples[static_cast<size_t>(r)] = sample_cycle_lengths(wt, pt, rng);
    }
  });

  std::string path = artifact_path(cfg, "samples.jsonl");
  {
    FileWriter f(path);
    for (std::int64_t r = 0; r < cfg.replicas; ++r) {
      const CycleSample& s = samples[static_cast<size_t>(r)];
      f.out << "{\"replica\":" << r << ",\"seed\":" << s.seed << ",\"ordered\":[";
      for (size_t i = 0; i < s.ordered.size(); ++i)
        f.out << (i ? "," : "") << s.ordered[i];
      f.out << "],\"sorted\":[";
      for (size_t i = 0; i < s.sorted.size(); ++i)
        f.out << (i ? "," : "") << s.sorted[i];
      f.out << "]}\n";
    }
  }
  report.artifacts.push_back(path);

  // histogram of the largest cycle fraction, ready for any plotting tool
  std::vector<std::int64_t> hist(static_cast<size_t>(cfg.bins), 0);
  const double n = static_cast<double>(params.particles);
  for (const CycleSample& s : samples) {
    double x = static_cast<double>(s.sorted.front()) / n;
    int b = std::min(cfg.bins - 1, static_cast<int>(x * cfg.bins));
    ++hist[static_cast<size_t>(b)];
  }
  std::string hpath = artifact_path(cfg, "hist.csv");
  FileWriter hf(hpath);
  hf.out << "bin_left,bin_right,count\n";
  for (int b = 0; b < cfg.bins; ++b)
    hf.out << fmt(static_cast<double>(b) / cfg.bins) << ","
           << fmt(static_cast<double>(b + 1) / cfg.bins) << "," << hist[static_cast<size_t>(b)]
           << "\n";
  report.artifacts.push_back(hpath);
}

void run_positions(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  WeightTable wt = make_weight_table(params);
  PartitionTable pt = make_partition_table(wt);
  RngStream rng(cfg.seed, 0);
  CycleSample cycles = sample_cycle_lengths(wt, pt, rng);
  PositionSample pos = sample_positions(params, cycles.ordered, rng);
  std::string path = artifact_path(cfg, "positions.csv");
  FileWriter f(path);
  f.out << "index,cycle";
  for (int q = 0; q < pos.dim; ++q) f.out << ",x" << q;
  f.out << "\n";
  for (size_t i = 0; i < pos.cycle.size(); ++i) {
    f.out << i << "," << pos.cycle[i];
    for (int q = 0; q < pos.dim; ++q) f.out << "," << fmt(pos.coords[i * pos.dim + q]);
    f.out << "\n";
  }
  report.artifacts.push_back(path);
}

void run_stickbreak(const ExperimentConfig& cfg, Report& report, double tau) {
  std::vector<StickSample> samples(static_cast<size_t>(cfg.replicas));
  parallel_for_chunks(cfg.replicas, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t r = b; r < e; ++r) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
      samples[static_cast<size_t>(r)] =
          sample_stick_breaking(cfg.theta, tau, static_cast<int>(cfg.stick_steps), rng);
    }
  });
  std::string path = artifact_path(cfg, "sticks.jsonl");
  FileWriter f(path);
  for (std::int64_t r = 0; r < cfg.replicas; ++r) {
    const StickSample& s = samples[static_cast<size_t>(r)];
    f.out << "{\"replica\":" << r << ",\"tau\":" << fmt(s.tau) << ",\"x\":[";
    for (size_t i = 0; i < s.x.size(); ++i) f.out << (i ? "," : "") << fmt(s.x[i]);
    f.out << "]}\n";
  }
  report.artifacts.push_back(path);
}

void run_regime(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  const double rho = params.rho();

  RhoSpec spec = cfg.rho_spec.value_or(RhoSpec::fixed(rho));
  Regime regime = classify(cfg.dim, cfg.theta, params.density, spec);
  report.constants.emplace_back("rho", rho);
  report.constants.emplace_back("L", params.side);
  report.constants.emplace_back("tau", regime.tau);
  report.constants.emplace_back("nu", regime.nu);

  if (cfg.dim >= 3)
    report.constants.emplace_back("rho_c", critical_density(params.density, cfg.theta));
  if (cfg.dim == 2)
    report.constants.emplace_back("alpha_c", critical_log_slope(params.density, cfg.theta));

  SaddleInfo saddle = solve_saddle(params);
  report.constants.emplace_back("r_N", saddle.r);
  report.constants.emplace_back("a_N", saddle.a);
  report.constants.emplace_back("b_N", saddle.b);

  bool r_star_ok = cfg.dim <= 2;
  if (cfg.dim >= 3) {
    double rho_c = critical_density(params.density, cfg.theta);
    r_star_ok = rho <= rho_c * (1.0 + 1e-12);
  }
  if (r_star_ok)
    report.constants.emplace_back("r_star", solve_r_star(params.density, cfg.theta, rho));
  report.constants.emplace_back("F_L_1", singular_part_at_one(params));

  std::string path = artifact_path(cfg, "regime.json");
  FileWriter f(path);
  f.out << "{\n  \"classification\": \"" << regime_name(regime.kind) << "\"";
  for (const auto& [name, value] : report.constants) {
    f.out << ",\n  \"" << name << "\": ";
    if (std::isinf(value))
      f.out << "\"infinity\"";
    else
      f.out << fmt(value);
  }
  f.out << "\n}\n";
  report.artifacts.push_back(path);
}

void run_pgf(const ExperimentConfig& cfg, Report& report) {
  ModelParams params = build_params(cfg);
  WeightTable wt = make_weight_table(params);
  PartitionTable pt = make_partition_table(wt);
  std::string path = artifact_path(cfg, "pgf.csv");
  FileWriter f(path);
  f.out << "t,pgf\n";
  for (int i = 0; i < cfg.pgf_t_count; ++i) {
    double t = cfg.pgf_t_min +
               (cfg.pgf_t_count > 1
                    ? (cfg.pgf_t_max - cfg.pgf_t_min) * i / (cfg.pgf_t_count - 1)
                    : 0.0);
    f.out << fmt(t) << "," << fmt(cycles_pgf(wt, pt, t)) << "\n";
  }
  report.artifacts.push_back(path);
}

void run_limitcheck(const ExperimentConfig& cfg, Report& report) {
  // evaluate the regime's reference law on a grid
  ModelParams params = build_params(cfg);
  const double rho = params.rho();
  RhoSpec spec = cfg.rho_spec.value_or(RhoSpec::fixed(rho));
  Regime regime = classify(cfg.dim, cfg.theta, params.density, spec);

  LimitLaw law = GammaHalfLaw{};
  double x_max = 8.0;
  switch (regime.kind) {
    case RegimeCase::Sub1:
      law = GammaHalfLaw{};
      break;
    case RegimeCase::Sub2:
    case RegimeCase::Critical2D:
      law = UniformLogScaleLaw{};
      x_max = 1.0;
      break;
    case RegimeCase::Critical1D: {
      double sigma = std::sqrt(params.density.covariance()(0, 0));
      law = ThetaDensityLaw{regime.alpha, sigma, cfg.theta};
      x_max = 1.0;
      break;
    }
    case RegimeCase::SubConst:
    case RegimeCase::CriticalHighD: {
      YLawPrefix y = y_pmf(params.density, cfg.theta, rho, 256);
      law = DiscreteYLaw{y.pmf, y.r_star};
      x_max = 256.0;
      break;
    }
    default:
      law = X1Law{cfg.theta, regime.tau};
      x_max = 1.0;
      break;
  }

  std::string path = artifact_path(cfg, "limitcheck.csv");
  FileWriter f(path);
  bool discrete = std::holds_alternative<DiscreteYLaw>(law);
  f.out << (discrete ? "x,cdf\n" : "x,cdf,density\n");
  const int grid = 512;
  for (int i = 1; i <= grid; ++i) {
    double x = x_max * i / grid;
    f.out << fmt(x) << "," << fmt(reference_cdf(law, x));
    if (!discrete) f.out << "," << fmt(reference_density(law, x * (1.0 - 1e-12)));
    f.out << "\n";
  }
  report.artifacts.push_back(path);
}

}  // namespace

Report run(const ExperimentConfig& cfg) {
  Report report;
  report.config_echo = cfg.to_json_text();
  const std::string& sub = cfg.subcommand;
  if (sub == "weights") {
    run_weights(cfg, report);
  } else if (sub == "partition") {
    run_partition(cfg, report);
  } else if (sub == "pmf") {
    run_pmf(cfg, report);
  } else if (sub == "sample") {
    run_sample(cfg, report);
  } else if (sub == "positions") {
    run_positions(cfg, report);
  } else if (sub == "stickbreak") {
    run_stickbreak(cfg, report, cfg.rho_spec
                                    ? classify(cfg.dim, cfg.theta, cfg.density.build(),
                                               *cfg.rho_spec)
                                          .tau
                                    : 0.0);
  } else if (sub == "regime") {
    run_regime(cfg, report);
  } else if (sub == "pgf") {
    run_pgf(cfg, report);
  } else if (sub == "limitcheck") {
    run_limitcheck(cfg, report);
  } else if (sub == "accept") {
    AcceptanceReport acc = run_acceptance(std::cout);
    for (const CriterionResult& r : acc.results)
      report.checks.push_back({r.name, r.statistic, r.threshold, r.pass});
    std::string path = artifact_path(cfg, "acceptance.json");
    FileWriter f(path);
    f.out << report.to_json_text() << "\n";
    report.artifacts.push_back(path);
  } else {
    throw config_error("runner: unknown subcommand '" + sub + "'");
  }

  std::string rpath = artifact_path(cfg, "report.json");
  FileWriter rf(rpath);
  report.artifacts.push_back(rpath);
  rf.out << report.to_json_text() << "\n";
  return report;
}

}  // namespace srp
