// SPDX-License-Identifier: Apache-2.0
#include "exitlab/presets.hpp"

#include <algorithm>
#include <map>

#include "exitlab/errors.hpp"

namespace exitlab {
namespace {

// One entry per preset; texts are complete config files (unset keys take
// defaults) and are parsed by the normal strict parser.
const std::map<std::string, const char*>& preset_table() {
  static const std::map<std::string, const char*> table = {
      {"dynkin1d",
       "# 1D proxy-system exit times against the boundary-value quadrature, eps = 0.5\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 0.4\n"
       "[domain]\n"
       "radius = 1\n"
       "[dynamics]\n"
       "dynamics = proxy\n"
       "eta = 0.25\n"
       "batch = 1\n"
       "dt = 0.001\n"
       "[exit]\n"
       "n_trials = 100000\n"
       "max_steps = 300000\n"
       "oracle = dynkin\n"
       "[run]\n"
       "seed = 2026\n"
       "output_dir = out/dynkin1d\n"},
      {"dynkin1d-eps03",
       "# 1D proxy-system exit times against the boundary-value quadrature, eps = 0.3\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 0.3\n"
       "[domain]\n"
       "radius = 0.8\n"
       "[dynamics]\n"
       "dynamics = proxy\n"
       "eta = 0.09\n"
       "batch = 1\n"
       "dt = 0.001\n"
       "[exit]\n"
       "n_trials = 100000\n"
       "max_steps = 600000\n"
       "oracle = dynkin\n"
       "[run]\n"
       "seed = 2027\n"
       "output_dir = out/dynkin1d-eps03\n"},
      {"proxy1d",
       "# isotropic-noise quasi-potential, 1D: expect v0 = lambda_min r^2 = 2\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = identity\n"
       "[domain]\n"
       "radius = 1\n"
       "[run]\n"
       "seed = 7\n"
       "output_dir = out/proxy1d\n"},
      {"proxy2d",
       "# isotropic-noise quasi-potential, 2D: expect v0 = lambda_min r^2 = 0.5\n"
       "[landscape]\n"
       "dim = 2\n"
       "hessian = diag 2 0.5\n"
       "covariance = identity\n"
       "[domain]\n"
       "radius = 1\n"
       "[run]\n"
       "seed = 8\n"
       "output_dir = out/proxy2d\n"},
      {"isosgd1d",
       "# curvature-matched noise quasi-potential, 1D: expect v0 = sqrt(2)\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 1\n"
       "[run]\n"
       "seed = 9\n"
       "output_dir = out/isosgd1d\n"},
      {"alpha-sweep",
       "# exit time vs sharpness (alpha map with radius compensation)\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 0.5\n"
       "[dynamics]\n"
       "dynamics = discrete_sgd\n"
       "eta = 0.03125\n"
       "batch = 1\n"
       "[exit]\n"
       "n_trials = 1000\n"
       "[sweep]\n"
       "sweep = alpha\n"
       "grid = 1 1.5874010519681994 2.5198420997897464 4\n"
       "regime_target = 2 8\n"
       "[run]\n"
       "seed = 11\n"
       "output_dir = out/alpha-sweep\n"},
      {"eta-sweep",
       "# exit time vs learning rate\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 0.5\n"
       "[dynamics]\n"
       "dynamics = discrete_sgd\n"
       "eta = 0.125\n"
       "batch = 1\n"
       "[exit]\n"
       "n_trials = 1000\n"
       "[sweep]\n"
       "sweep = eta\n"
       "grid = 0.03125 0.04960628287400623 0.07874506561842957 0.125\n"
       "regime_target = 2 8\n"
       "[run]\n"
       "seed = 12\n"
       "output_dir = out/eta-sweep\n"},
      {"batch-sweep",
       "# exit time vs batch size\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 0.5\n"
       "[dynamics]\n"
       "dynamics = discrete_sgd\n"
       "eta = 0.125\n"
       "batch = 1\n"
       "[exit]\n"
       "n_trials = 1000\n"
       "[sweep]\n"
       "sweep = batch\n"
       "grid = 1 1.5874010519681994 2.5198420997897464 4\n"
       "regime_target = 2 8\n"
       "[run]\n"
       "seed = 13\n"
       "output_dir = out/batch-sweep\n"},
      {"beta-sweep",
       "# exit time vs barrier depth (temperature map at fixed curvature)\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 0.5\n"
       "[dynamics]\n"
       "dynamics = discrete_sgd\n"
       "eta = 0.125\n"
       "batch = 1\n"
       "[exit]\n"
       "n_trials = 1000\n"
       "[sweep]\n"
       "sweep = beta\n"
       "grid = 1 1.5874010519681994 2.5198420997897464 4\n"
       "regime_target = 2 8\n"
       "[run]\n"
       "seed = 14\n"
       "output_dir = out/beta-sweep\n"},
      {"proxy-ref",
       "# alpha sweep under isotropic-noise dynamics: relaxation-normalized\n"
       "# exit times are sharpness-independent\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = identity\n"
       "[domain]\n"
       "radius = 0.5\n"
       "[dynamics]\n"
       "dynamics = proxy\n"
       "eta = 0.125\n"
       "batch = 1\n"
       "dt = 0.0125\n"
       "[exit]\n"
       "n_trials = 2000\n"
       "[sweep]\n"
       "sweep = alpha\n"
       "grid = 1 1.5874010519681994 2.5198420997897464 4\n"
       "regime_target = 2 8\n"
       "normalize_relaxation = true\n"
       "[run]\n"
       "seed = 401\n"
       "output_dir = out/proxy-ref\n"},
      {"proxy-ref-contrast",
       "# the same alpha sweep under discrete updates with curvature-matched\n"
       "# noise: normalized exit times depend strongly on sharpness\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 0.5\n"
       "[dynamics]\n"
       "dynamics = discrete_sgd\n"
       "eta = 0.03125\n"
       "batch = 1\n"
       "[exit]\n"
       "n_trials = 2000\n"
       "[sweep]\n"
       "sweep = alpha\n"
       "grid = 1 1.5874010519681994 2.5198420997897464 4\n"
       "regime_target = 2 8\n"
       "normalize_relaxation = true\n"
       "[run]\n"
       "seed = 402\n"
       "output_dir = out/proxy-ref-contrast\n"},
      {"discretization",
       "# coupled coarse/fine weak-error probe of the update discretization\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 1\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 0.10392304845413263\n"
       "[dynamics]\n"
       "dynamics = discrete_sgd\n"
       "eta = 0.02\n"
       "batch = 5.555555555555555\n"
       "[exit]\n"
       "n_trials = 4000\n"
       "[sweep]\n"
       "grid = 0.005 0.007937005259840997 0.012599210498948732 0.02\n"
       "fine_substeps = 64\n"
       "[run]\n"
       "seed = 501\n"
       "output_dir = out/discretization\n"},
      {"hj-iso",
       "# stationary Hamilton-Jacobi residual of the analytic field, isotropic case\n"
       "[landscape]\n"
       "dim = 2\n"
       "hessian = diag 2 2\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 1\n"
       "[hjcheck]\n"
       "field = analytic\n"
       "n_samples = 100\n"
       "[run]\n"
       "seed = 601\n"
       "output_dir = out/hj-iso\n"},
      {"hj-wrong",
       "# residual of the deliberately wrong field (the loss gradient itself)\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "covariance = identity\n"
       "[domain]\n"
       "radius = 1\n"
       "[hjcheck]\n"
       "field = loss\n"
       "n_samples = 100\n"
       "[run]\n"
       "seed = 602\n"
       "output_dir = out/hj-wrong\n"},
      {"validate2d",
       "# domain sanity check on an anisotropic 2D bowl\n"
       "[landscape]\n"
       "dim = 2\n"
       "hessian = diag 2 0.5\n"
       "covariance = hessian\n"
       "[domain]\n"
       "radius = 1\n"
       "validate_samples = 64\n"
       "[run]\n"
       "seed = 603\n"
       "output_dir = out/validate2d\n"},
      {"simflow1d",
       "# noiseless gradient-flow trajectory dump\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "[dynamics]\n"
       "dynamics = gradient_flow\n"
       "eta = 0.1\n"
       "dt = 0.1\n"
       "horizon_steps = 20\n"
       "[exit]\n"
       "initial = 1\n"
       "[run]\n"
       "seed = 604\n"
       "output_dir = out/simflow1d\n"},
      {"start-outside",
       "# degenerate exit run: the start point is already outside the domain\n"
       "[landscape]\n"
       "dim = 1\n"
       "hessian = diag 2\n"
       "[domain]\n"
       "radius = 1\n"
       "[dynamics]\n"
       "dynamics = proxy\n"
       "eta = 0.1\n"
       "batch = 1\n"
       "dt = 0.01\n"
       "[exit]\n"
       "n_trials = 10\n"
       "max_steps = 100\n"
       "initial = 2\n"
       "[run]\n"
       "seed = 605\n"
       "output_dir = out/start-outside\n"}};
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_table()) {
    names.push_back(name);
  }
  return names;  // std::map iteration is already sorted
}

std::string preset_text(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const auto& [n, t] : table) {
      known += known.empty() ? n : ", " + n;
    }
    throw ConfigError("preset: unknown preset `" + name + "` (known: " + known + ")");
  }
  return it->second;
}

}  // namespace exitlab
