// SPDX-License-Identifier: Apache-2.0
#include "exitlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "exitlab/csv.hpp"
#include "exitlab/errors.hpp"
#include "exitlab/numfmt.hpp"

namespace exitlab {
namespace {

const char* const kSections[] = {"landscape", "domain",  "dynamics", "exit",
                                 "action",    "sweep",   "hjcheck",  "run"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string token;
  while (in >> token) {
    out.push_back(token);
  }
  return out;
}

//! Raw `section.key -> value` map with duplicate detection.
std::map<std::string, std::string> raw_entries(const std::string& text) {
  std::map<std::string, std::string> raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      const bool known =
          std::any_of(std::begin(kSections), std::end(kSections),
                      [&](const char* s) { return section == s; });
      if (!known) {
        throw ConfigError("config: unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected `key = value` at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("config: key `" + key + "` appears before any [section]");
    }
    if (key.empty() || value.empty()) {
      throw ConfigError("config: empty key or value at line " + std::to_string(line_no));
    }
    const std::string full = section + "." + key;
    if (!raw.emplace(full, value).second) {
      throw ConfigError("config: duplicate key " + full);
    }
  }
  return raw;
}

//! Pulls entries out of the raw map as they are consumed; whatever is left at
//! the end is unknown and rejected by full name.
class Reader {
 public:
  explicit Reader(std::map<std::string, std::string> raw) : raw_(std::move(raw)) {}

  bool take(const std::string& full, std::string& value) {
    const auto it = raw_.find(full);
    if (it == raw_.end()) {
      return false;
    }
    value = it->second;
    raw_.erase(it);
    return true;
  }

  double number(const std::string& full, double fallback) {
    std::string v;
    return take(full, v) ? parse_double(v, "config: " + full) : fallback;
  }

  std::uint64_t unsigned_int(const std::string& full, std::uint64_t fallback) {
    std::string v;
    return take(full, v) ? parse_u64(v, "config: " + full) : fallback;
  }

  bool boolean(const std::string& full, bool fallback) {
    std::string v;
    return take(full, v) ? parse_bool(v, "config: " + full) : fallback;
  }

  std::string word(const std::string& full, const std::string& fallback) {
    std::string v;
    return take(full, v) ? v : fallback;
  }

  void finish() const {
    if (!raw_.empty()) {
      throw ConfigError("config: unknown key " + raw_.begin()->first);
    }
  }

 private:
  std::map<std::string, std::string> raw_;
};

std::vector<double> parse_numbers(const std::string& value, const std::string& what) {
  std::vector<double> out;
  for (const std::string& token : split_ws(value)) {
    out.push_back(parse_double(token, what));
  }
  return out;
}

int small_int(Reader& reader, const std::string& full, int fallback, int min_value) {
  const auto v = reader.unsigned_int(full, static_cast<std::uint64_t>(fallback));
  if (v < static_cast<std::uint64_t>(min_value) || v > 1000000000ULL) {
    throw ConfigError("config: " + full + " must be in [" + std::to_string(min_value) +
                      ", 1e9]");
  }
  return static_cast<int>(v);
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

ConfigData parse_config(const std::string& text) {
  Reader reader(raw_entries(text));
  ConfigData c;

  // [landscape] — dim first; the vector/matrix keys depend on it.
  c.dim = small_int(reader, "landscape.dim", 1, 1);
  c.hessian = Eigen::MatrixXd::Identity(c.dim, c.dim);
  std::string value;
  if (reader.take("landscape.hessian", value)) {
    std::vector<std::string> tokens = split_ws(value);
    if (!tokens.empty() && tokens.front() == "diag") {
      if (static_cast<int>(tokens.size()) != c.dim + 1) {
        throw ConfigError("config: landscape.hessian diag needs exactly dim values");
      }
      c.hessian.setZero();
      for (int i = 0; i < c.dim; ++i) {
        c.hessian(i, i) = parse_double(tokens[i + 1], "config: landscape.hessian");
      }
    } else {
      if (static_cast<int>(tokens.size()) != c.dim * c.dim) {
        throw ConfigError("config: landscape.hessian needs dim*dim values (row-major) "
                          "or `diag` plus dim values");
      }
      for (int i = 0; i < c.dim; ++i) {
        for (int j = 0; j < c.dim; ++j) {
          c.hessian(i, j) =
              parse_double(tokens[static_cast<std::size_t>(i) * c.dim + j],
                           "config: landscape.hessian");
        }
      }
    }
  }
  c.minimizer = Eigen::VectorXd::Zero(c.dim);
  if (reader.take("landscape.minimizer", value)) {
    const std::vector<double> vs = parse_numbers(value, "config: landscape.minimizer");
    if (static_cast<int>(vs.size()) != c.dim) {
      throw ConfigError("config: landscape.minimizer needs exactly dim values");
    }
    for (int i = 0; i < c.dim; ++i) {
      c.minimizer(i) = vs[static_cast<std::size_t>(i)];
    }
  }
  c.min_value = reader.number("landscape.min_value", c.min_value);
  c.alpha = reader.number("landscape.alpha", c.alpha);
  c.beta = reader.number("landscape.beta", c.beta);
  if (reader.take("landscape.covariance", value)) {
    if (value == "hessian") {
      c.covariance = CovarianceModel::Hessian;
    } else if (value == "identity") {
      c.covariance = CovarianceModel::Identity;
    } else {
      throw ConfigError("config: landscape.covariance must be hessian or identity");
    }
  }

  // [domain]
  c.radius = reader.number("domain.radius", c.radius);
  c.compensate_radius = reader.boolean("domain.compensate_radius", c.compensate_radius);
  c.validate_samples = small_int(reader, "domain.validate_samples", c.validate_samples, 1);
  c.validate_budget = reader.unsigned_int("domain.validate_budget", c.validate_budget);
  if (c.validate_budget < 1) {
    throw ConfigError("config: domain.validate_budget must be >= 1");
  }

  // [dynamics]
  if (reader.take("dynamics.dynamics", value)) {
    if (value == "discrete_sgd") {
      c.dynamics = DynamicsKind::DiscreteSGD;
    } else if (value == "continuous_sgd") {
      c.dynamics = DynamicsKind::ContinuousSGD;
    } else if (value == "proxy") {
      c.dynamics = DynamicsKind::ProxySystem;
    } else if (value == "gradient_flow") {
      c.dynamics = DynamicsKind::GradientFlow;
    } else {
      throw ConfigError("config: dynamics.dynamics must be one of discrete_sgd, "
                        "continuous_sgd, proxy, gradient_flow");
    }
  }
  c.eta = reader.number("dynamics.eta", c.eta);
  c.batch = reader.number("dynamics.batch", c.batch);
  c.dt = reader.number("dynamics.dt", c.eta);  // default: dt = eta
  c.horizon_steps = reader.unsigned_int("dynamics.horizon_steps", c.horizon_steps);
  if (c.horizon_steps < 1) {
    throw ConfigError("config: dynamics.horizon_steps must be >= 1");
  }

  // [exit]
  c.n_trials = reader.unsigned_int("exit.n_trials", c.n_trials);
  if (c.n_trials < 2) {
    throw ConfigError("config: exit.n_trials must be >= 2");
  }
  if (reader.take("exit.max_steps", value)) {
    if (value == "auto") {
      c.max_steps_auto = true;
    } else {
      c.max_steps_auto = false;
      c.max_steps = parse_u64(value, "config: exit.max_steps");
      if (c.max_steps < 1) {
        throw ConfigError("config: exit.max_steps must be >= 1 (or auto)");
      }
    }
  }
  c.initial = c.minimizer;
  if (reader.take("exit.initial", value)) {
    const std::vector<double> vs = parse_numbers(value, "config: exit.initial");
    if (static_cast<int>(vs.size()) != c.dim) {
      throw ConfigError("config: exit.initial needs exactly dim values");
    }
    for (int i = 0; i < c.dim; ++i) {
      c.initial(i) = vs[static_cast<std::size_t>(i)];
    }
  }
  if (reader.take("exit.oracle", value)) {
    if (value == "none") {
      c.oracle = OracleKind::None;
    } else if (value == "dynkin") {
      c.oracle = OracleKind::Dynkin;
    } else {
      throw ConfigError("config: exit.oracle must be none or dynkin");
    }
  }

  // [action]
  c.path_nodes = small_int(reader, "action.path_nodes", c.path_nodes, 8);
  if (reader.take("action.t_grid", value)) {
    if (value == "auto") {
      c.t_grid.clear();
    } else {
      c.t_grid = parse_numbers(value, "config: action.t_grid");
      for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
        if (!(c.t_grid[i] > 0.0)) {
          throw ConfigError("config: action.t_grid values must be positive");
        }
        if (i > 0 && !(c.t_grid[i] > c.t_grid[i - 1])) {
          throw ConfigError("config: action.t_grid must be strictly increasing");
        }
      }
    }
  }
  c.metric_exponent = reader.number("action.metric_exponent", c.metric_exponent);
  if (c.metric_exponent != 0.5 && c.metric_exponent != 1.0) {
    throw ConfigError("config: action.metric_exponent must be 0.5 or 1");
  }
  c.opt_max_iters = small_int(reader, "action.opt_max_iters", c.opt_max_iters, 1);
  c.opt_tol = reader.number("action.opt_tol", c.opt_tol);
  if (!(c.opt_tol > 0.0)) {
    throw ConfigError("config: action.opt_tol must be positive");
  }

  // [sweep]
  if (reader.take("sweep.sweep", value)) {
    if (value == "alpha") {
      c.sweep = SweepKind::Alpha;
    } else if (value == "eta") {
      c.sweep = SweepKind::Eta;
    } else if (value == "batch") {
      c.sweep = SweepKind::Batch;
    } else if (value == "beta") {
      c.sweep = SweepKind::Beta;
    } else {
      throw ConfigError("config: sweep.sweep must be one of alpha, eta, batch, beta");
    }
  }
  if (reader.take("sweep.grid", value)) {
    c.grid = parse_numbers(value, "config: sweep.grid");
  }
  if (reader.take("sweep.regime_target", value)) {
    if (value == "off") {
      c.regime_enabled = false;
    } else {
      const std::vector<double> vs = parse_numbers(value, "config: sweep.regime_target");
      if (vs.size() != 2 || !(vs[0] > 0.0) || !(vs[1] > vs[0])) {
        throw ConfigError("config: sweep.regime_target must be `lo hi` with 0 < lo < hi, "
                          "or off");
      }
      c.regime_enabled = true;
      c.regime_lo = vs[0];
      c.regime_hi = vs[1];
    }
  }
  c.normalize_relaxation =
      reader.boolean("sweep.normalize_relaxation", c.normalize_relaxation);
  c.fine_substeps = small_int(reader, "sweep.fine_substeps", c.fine_substeps, 1);

  // [hjcheck]
  if (reader.take("hjcheck.field", value)) {
    if (value == "analytic") {
      c.hj_field = HjField::Analytic;
    } else if (value == "zero") {
      c.hj_field = HjField::Zero;
    } else if (value == "loss") {
      c.hj_field = HjField::Loss;
    } else {
      throw ConfigError("config: hjcheck.field must be one of analytic, zero, loss");
    }
  }
  c.hj_samples = small_int(reader, "hjcheck.n_samples", c.hj_samples, 1);

  // [run]
  c.seed = reader.unsigned_int("run.seed", c.seed);
  c.output_dir = reader.word("run.output_dir", c.output_dir);
  c.emit_plots = reader.boolean("run.emit_plots", c.emit_plots);
  c.threads = small_int(reader, "run.threads", c.threads, 1);

  reader.finish();

  // Cross-field validation via the module constructors so the CLI fails fast.
  (void)Landscape(landscape_spec(c));
  (void)dynamics_config(c);
  if (!(c.radius > 0.0) || !std::isfinite(c.radius)) {
    throw ConfigError("config: domain.radius must be positive");
  }
  return c;
}

ConfigData parse_config_file(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

std::string resolved_text(const ConfigData& c) {
  std::ostringstream out;
  out << "[landscape]\n";
  out << "dim = " << c.dim << "\n";
  bool diagonal = true;
  for (int i = 0; i < c.dim && diagonal; ++i) {
    for (int j = 0; j < c.dim; ++j) {
      if (i != j && c.hessian(i, j) != 0.0) {
        diagonal = false;
        break;
      }
    }
  }
  out << "hessian =";
  if (diagonal) {
    out << " diag";
    for (int i = 0; i < c.dim; ++i) {
      out << ' ' << format_double(c.hessian(i, i));
    }
  } else {
    for (int i = 0; i < c.dim; ++i) {
      for (int j = 0; j < c.dim; ++j) {
        out << ' ' << format_double(c.hessian(i, j));
      }
    }
  }
  out << "\n";
  out << "minimizer =";
  for (int i = 0; i < c.dim; ++i) {
    out << ' ' << format_double(c.minimizer(i));
  }
  out << "\n";
  out << "min_value = " << format_double(c.min_value) << "\n";
  out << "alpha = " << format_double(c.alpha) << "\n";
  out << "beta = " << format_double(c.beta) << "\n";
  out << "covariance = "
      << (c.covariance == CovarianceModel::Hessian ? "hessian" : "identity") << "\n";

  out << "\n[domain]\n";
  out << "radius = " << format_double(c.radius) << "\n";
  out << "compensate_radius = " << format_bool(c.compensate_radius) << "\n";
  out << "validate_samples = " << c.validate_samples << "\n";
  out << "validate_budget = " << c.validate_budget << "\n";

  out << "\n[dynamics]\n";
  out << "dynamics = ";
  switch (c.dynamics) {
    case DynamicsKind::DiscreteSGD:
      out << "discrete_sgd";
      break;
    case DynamicsKind::ContinuousSGD:
      out << "continuous_sgd";
      break;
    case DynamicsKind::ProxySystem:
      out << "proxy";
      break;
    case DynamicsKind::GradientFlow:
      out << "gradient_flow";
      break;
  }
  out << "\n";
  out << "eta = " << format_double(c.eta) << "\n";
  out << "batch = " << format_double(c.batch) << "\n";
  out << "dt = " << format_double(c.dt) << "\n";
  out << "horizon_steps = " << c.horizon_steps << "\n";

  out << "\n[exit]\n";
  out << "n_trials = " << c.n_trials << "\n";
  out << "max_steps = ";
  if (c.max_steps_auto) {
    out << "auto";
  } else {
    out << c.max_steps;
  }
  out << "\n";
  out << "initial =";
  for (int i = 0; i < c.dim; ++i) {
    out << ' ' << format_double(c.initial(i));
  }
  out << "\n";
  out << "oracle = " << (c.oracle == OracleKind::Dynkin ? "dynkin" : "none") << "\n";

  out << "\n[action]\n";
  out << "path_nodes = " << c.path_nodes << "\n";
  out << "t_grid = " << (c.t_grid.empty() ? "auto" : join_numbers(c.t_grid)) << "\n";
  out << "metric_exponent = " << format_double(c.metric_exponent) << "\n";
  out << "opt_max_iters = " << c.opt_max_iters << "\n";
  out << "opt_tol = " << format_double(c.opt_tol) << "\n";

  out << "\n[sweep]\n";
  out << "sweep = ";
  switch (c.sweep) {
    case SweepKind::Alpha:
      out << "alpha";
      break;
    case SweepKind::Eta:
      out << "eta";
      break;
    case SweepKind::Batch:
      out << "batch";
      break;
    case SweepKind::Beta:
      out << "beta";
      break;
  }
  out << "\n";
  out << "grid = " << join_numbers(c.grid) << "\n";
  out << "regime_target = ";
  if (c.regime_enabled) {
    out << format_double(c.regime_lo) << ' ' << format_double(c.regime_hi);
  } else {
    out << "off";
  }
  out << "\n";
  out << "normalize_relaxation = " << format_bool(c.normalize_relaxation) << "\n";
  out << "fine_substeps = " << c.fine_substeps << "\n";

  out << "\n[hjcheck]\n";
  out << "field = ";
  switch (c.hj_field) {
    case HjField::Analytic:
      out << "analytic";
      break;
    case HjField::Zero:
      out << "zero";
      break;
    case HjField::Loss:
      out << "loss";
      break;
  }
  out << "\n";
  out << "n_samples = " << c.hj_samples << "\n";

  out << "\n[run]\n";
  out << "seed = " << c.seed << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "emit_plots = " << format_bool(c.emit_plots) << "\n";
  out << "threads = " << c.threads << "\n";
  return out.str();
}

LandscapeSpec landscape_spec(const ConfigData& c) {
  LandscapeSpec spec;
  spec.dim = c.dim;
  spec.hessian = c.hessian;
  spec.minimizer = c.minimizer;
  spec.min_value = c.min_value;
  spec.alpha = c.alpha;
  spec.beta = c.beta;
  spec.covariance = c.covariance;
  return spec;
}

DynamicsConfig dynamics_config(const ConfigData& c) {
  return DynamicsConfig::make(c.dynamics, c.eta, c.batch, c.dt);
}

OptimizerSettings optimizer_settings(const ConfigData& c) {
  OptimizerSettings settings;
  settings.max_iters = c.opt_max_iters;
  settings.tol = c.opt_tol;
  return settings;
}

RunSetup run_setup(const ConfigData& c) {
  RunSetup setup;
  setup.landscape = landscape_spec(c);
  setup.radius = c.radius;
  setup.compensate_radius = c.compensate_radius;
  setup.dynamics = dynamics_config(c);
  setup.n_trials = static_cast<int>(std::min<std::uint64_t>(c.n_trials, 1000000000ULL));
  setup.max_steps = c.max_steps_auto ? 0 : static_cast<std::int64_t>(c.max_steps);
  setup.seed = c.seed;
  setup.threads = c.threads;
  return setup;
}

SweepSpec sweep_spec(const ConfigData& c) {
  SweepSpec spec;
  spec.swept = c.sweep;
  spec.grid = c.grid;
  spec.base = run_setup(c);
  if (c.regime_enabled) {
    spec.regime_target = std::make_pair(c.regime_lo, c.regime_hi);
  }
  spec.normalize_relaxation = c.normalize_relaxation;
  return spec;
}

}  // namespace exitlab
