#ifndef SRP_CONFIG_HPP
#define SRP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srp/limits.hpp"
#include "srp/spectral.hpp"

namespace srp {

// Density specification as it appears in config files.
struct DensitySpec {
  enum class Kind { Gaussian, Tabulated };
  Kind kind = Kind::Gaussian;
  int dim = 1;
  std::vector<double> covariance;  // row-major d x d (Gaussian)
  std::string csv_path;            // tabulated
  JumpDensity build() const;
};

// One experiment: model block + run block + output block.
struct ExperimentConfig {
  // model
  int dim = 1;
  double theta = 1.0;
  DensitySpec density;
  std::int64_t particles = 0;
  std::optional<double> rho;       // exactly one of rho / side given
  std::optional<double> side;
  std::optional<RhoSpec> rho_spec; // for classification (defaults to fixed rho)

  // run
  std::string subcommand;
  std::int64_t replicas = 1;
  std::uint64_t seed = 1;
  double epsilon = 0.01;
  int bins = 100;
  double pgf_t_min = 0.5, pgf_t_max = 2.0;
  int pgf_t_count = 7;
  std::int64_t pmf_prefix = 0;     // 0: full
  std::int64_t stick_steps = 200;

  // output
  std::string out_dir = ".";
  std::string prefix = "srp";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_json_text() const;

  double resolved_side() const;  // L from either side or rho
  void validate() const;
};

// One row of the report: a named check with its statistic and threshold.
struct CheckRow {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct Report {
  std::string config_echo;  // JSON text of the config
  std::vector<std::pair<std::string, double>> constants;
  std::vector<CheckRow> checks;
  std::vector<std::string> artifacts;  // files written

  bool all_pass() const;
  std::string to_json_text() const;
};

}  // namespace srp

#endif
