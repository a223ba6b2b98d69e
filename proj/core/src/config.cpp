#include "srp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "srp/errors.hpp"

namespace srp {

using nlohmann::json;

JumpDensity DensitySpec::build() const {
  if (kind == Kind::Gaussian) {
    if (covariance.empty()) return JumpDensity::gaussian_isotropic(dim, 1.0);
    return JumpDensity::gaussian(dim, SymMatrix(dim, covariance));
  }
  if (csv_path.empty()) throw config_error("config: tabulated density needs model.density.csv");
  return JumpDensity::tabulated_1d_from_csv(csv_path);
}

namespace {

DensitySpec parse_density(const json& j) {
  if (!j.is_object()) throw config_error("config: model.density must be an object");
  DensitySpec spec;
  std::string type = j.value("type", "gaussian");
  if (type == "gaussian") {
    spec.kind = DensitySpec::Kind::Gaussian;
    if (j.contains("sigma")) {
      double s = j.at("sigma").get<double>();
      spec.covariance.clear();
      spec.dim = 0;  // filled by caller
      spec.csv_path = "";
      spec.covariance = {s * s};  // marker; expanded once dim is known
    } else if (j.contains("covariance")) {
      const json& cov = j.at("covariance");
      if (!cov.is_array()) throw config_error("config: model.density.covariance must be an array");
      for (const auto& row : cov) {
        if (!row.is_array()) throw config_error("config: covariance rows must be arrays");
        for (const auto& v : row) spec.covariance.push_back(v.get<double>());
      }
    }
  } else if (type == "tabulated") {
    spec.kind = DensitySpec::Kind::Tabulated;
    if (!j.contains("csv")) throw config_error("config: model.density.csv is required");
    spec.csv_path = j.at("csv").get<std::string>();
  } else {
    throw config_error("config: unknown density type '" + type + "'");
  }
  return spec;
}

RhoSpec parse_rho_spec(const json& j) {
  std::string kind = j.value("kind", "fixed");
  if (kind == "fixed") return RhoSpec::fixed(j.at("value").get<double>());
  if (kind == "power") return RhoSpec::power(j.at("c").get<double>(), j.at("a").get<double>());
  if (kind == "log") return RhoSpec::log_law(j.at("c").get<double>());
  throw config_error("config: rho_spec.kind must be fixed | power | log");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  if (!j.contains("model")) throw config_error("config: missing 'model' block");
  const json& model = j.at("model");
  cfg.dim = model.value("d", 1);
  cfg.theta = model.value("theta", 1.0);
  if (!model.contains("density"))
    throw config_error("config: missing field model.density");
  cfg.density = parse_density(model.at("density"));
  cfg.density.dim = cfg.dim;
  // an isotropic sigma marker expands to sigma^2 I_d
  if (cfg.density.kind == DensitySpec::Kind::Gaussian && cfg.density.covariance.size() == 1 &&
      cfg.dim > 1 && model.at("density").contains("sigma")) {
    double s2 = cfg.density.covariance[0];
    cfg.density.covariance.assign(static_cast<size_t>(cfg.dim) * cfg.dim, 0.0);
    for (int i = 0; i < cfg.dim; ++i)
      cfg.density.covariance[static_cast<size_t>(i) * cfg.dim + i] = s2;
  }
  if (!model.contains("N")) throw config_error("config: missing field model.N");
  cfg.particles = model.at("N").get<std::int64_t>();
  if (model.contains("rho")) cfg.rho = model.at("rho").get<double>();
  if (model.contains("L")) cfg.side = model.at("L").get<double>();
  if (model.contains("rho_spec")) cfg.rho_spec = parse_rho_spec(model.at("rho_spec"));

  if (j.contains("run")) {
    const json& run = j.at("run");
    cfg.subcommand = run.value("subcommand", "");
    cfg.replicas = run.value("replicas", static_cast<std::int64_t>(1));
    cfg.seed = run.value("seed", static_cast<std::uint64_t>(1));
    cfg.epsilon = run.value("epsilon", 0.01);
    cfg.bins = run.value("bins", 100);
    cfg.pmf_prefix = run.value("pmf_prefix", static_cast<std::int64_t>(0));
    cfg.stick_steps = run.value("stick_steps", static_cast<std::int64_t>(200));
    if (run.contains("pgf_t")) {
      const json& t = run.at("pgf_t");
      cfg.pgf_t_min = t.value("min", 0.5);
      cfg.pgf_t_max = t.value("max", 2.0);
      cfg.pgf_t_count = t.value("count", 7);
    }
  }
  if (j.contains("output")) {
    const json& outj = j.at("output");
    cfg.out_dir = outj.value("dir", ".");
    cfg.prefix = outj.value("prefix", "srp");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void ExperimentConfig::validate() const {
  if (dim < 1) throw config_error("config: model.d must be >= 1");
  if (!(theta > 0.0)) throw config_error("config: model.theta must be positive");
  if (particles < 1) throw config_error("config: model.N must be >= 1");
  if (rho.has_value() == side.has_value())
    throw config_error("config: give exactly one of model.rho and model.L");
  if (replicas < 1) throw config_error("config: run.replicas must be >= 1");
  if (bins < 1) throw config_error("config: run.bins must be >= 1");
  if (density.kind == DensitySpec::Kind::Tabulated && dim != 1)
    throw config_error("config: tabulated densities are one-dimensional");
}

double ExperimentConfig::resolved_side() const {
  if (side) return *side;
  return std::pow(static_cast<double>(particles) / *rho, 1.0 / dim);
}

std::string ExperimentConfig::to_json_text() const {
  json density_j;
  if (density.kind == DensitySpec::Kind::Gaussian) {
    density_j["type"] = "gaussian";
    if (!density.covariance.empty()) {
      json rows = json::array();
      for (int i = 0; i < dim; ++i) {
        json row = json::array();
        for (int k = 0; k < dim; ++k)
          row.push_back(density.covariance[static_cast<size_t>(i) * dim + k]);
        rows.push_back(row);
      }
      density_j["covariance"] = rows;
    }
  } else {
    density_j["type"] = "tabulated";
    density_j["csv"] = density.csv_path;
  }
  json j;
  j["model"]["d"] = dim;
  j["model"]["theta"] = theta;
  j["model"]["density"] = density_j;
  j["model"]["N"] = particles;
  if (rho) j["model"]["rho"] = *rho;
  if (side) j["model"]["L"] = *side;
  j["run"]["subcommand"] = subcommand;
  j["run"]["replicas"] = replicas;
  j["run"]["seed"] = seed;
  j["run"]["epsilon"] = epsilon;
  j["run"]["bins"] = bins;
  j["output"]["dir"] = out_dir;
  j["output"]["prefix"] = prefix;
  return j.dump(2);
}

bool Report::all_pass() const {
  for (const CheckRow& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json_text() const {
  json j;
  j["config"] = json::parse(config_echo.empty() ? "{}" : config_echo);
  for (const auto& [name, value] : constants) {
    if (std::isinf(value))
      j["constants"][name] = "infinity";
    else
      j["constants"][name] = value;
  }
  j["checks"] = json::array();
  for (const CheckRow& c : checks) {
    json row;
    row["name"] = c.name;
    row["statistic"] = c.statistic;
    row["threshold"] = c.threshold;
    row["pass"] = c.pass;
    j["checks"].push_back(row);
  }
  j["artifacts"] = artifacts;
  return j.dump(2);
}

}  // namespace srp
