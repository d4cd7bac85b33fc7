// SPDX-License-Identifier: Apache-2.0
// Command-line front end: every library capability as a subcommand over a
// declarative config, with deterministic seeding, CSV outputs, a manifest per
// run, and optional SVG line plots.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "exitlab/action.hpp"
#include "exitlab/config.hpp"
#include "exitlab/csv.hpp"
#include "exitlab/dynamics.hpp"
#include "exitlab/dynkin.hpp"
#include "exitlab/errors.hpp"
#include "exitlab/exit_mc.hpp"
#include "exitlab/experiments.hpp"
#include "exitlab/landscape.hpp"
#include "exitlab/manifest.hpp"
#include "exitlab/numfmt.hpp"
#include "exitlab/presets.hpp"
#include "exitlab/svg.hpp"
#include "exitlab/version.hpp"

namespace {

using namespace exitlab;

//! File contents accumulated by a subcommand, written (and recorded in the
//! manifest) only after the computation finished.
struct RunOutputs {
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::string& name, std::string content) {
    files.emplace_back(name, std::move(content));
  }
};

std::string regressor_label(SweepKind kind) {
  switch (kind) {
    case SweepKind::Alpha:
      return "1/sqrt(sharpness)";
    case SweepKind::Eta:
      return "1/eta";
    case SweepKind::Batch:
      return "batch";
    case SweepKind::Beta:
      return "depth";
  }
  return "regressor";
}

std::string sweep_title(SweepKind kind) {
  switch (kind) {
    case SweepKind::Alpha:
      return "exit time vs sharpness";
    case SweepKind::Eta:
      return "exit time vs learning rate";
    case SweepKind::Batch:
      return "exit time vs batch size";
    case SweepKind::Beta:
      return "exit time vs depth";
  }
  return "sweep";
}

void cmd_simulate(const ConfigData& cfg, RunOutputs& out) {
  const Landscape landscape(landscape_spec(cfg));
  const DynamicsConfig dynamics = dynamics_config(cfg);
  RngStream rng(cfg.seed, 0);
  const Path trajectory = simulate(cfg.initial, dynamics, landscape, cfg.horizon_steps, rng);
  out.add("trajectory.csv", csv_trajectory(trajectory));
  if (cfg.emit_plots) {
    std::vector<PlotSeries> series(static_cast<std::size_t>(trajectory.dim()));
    for (Eigen::Index j = 0; j < trajectory.dim(); ++j) {
      auto& s = series[static_cast<std::size_t>(j)];
      s.label = "theta_" + std::to_string(j);
      for (Eigen::Index i = 0; i < trajectory.points.rows(); ++i) {
        s.xs.push_back(static_cast<double>(i) * trajectory.spacing());
        s.ys.push_back(trajectory.points(i, j));
      }
    }
    PlotSpec plot;
    plot.title = "trajectory";
    plot.x_label = "time";
    plot.y_label = "theta";
    out.add("trajectory.svg", render_line_plot(plot, series));
  }
  std::cout << "simulate: " << trajectory.points.rows() << " rows over horizon "
            << format_double(trajectory.horizon) << "\n";
}

void cmd_exit_time(const ConfigData& cfg, RunOutputs& out) {
  const Landscape landscape(landscape_spec(cfg));
  const Domain domain = make_domain(landscape, cfg.radius);
  const DynamicsConfig dynamics = dynamics_config(cfg);
  const std::uint64_t max_steps =
      cfg.max_steps_auto ? exit_step_budget(landscape, cfg.radius, dynamics) : cfg.max_steps;
  std::vector<ExitRecord> records;
  const ExitStats stats = mean_exit_time(cfg.initial, dynamics, landscape, domain,
                                         cfg.n_trials, max_steps, cfg.seed, cfg.threads,
                                         &records);
  out.add("trials.csv", csv_trials(records));
  out.add("aggregate.csv", csv_aggregate(stats));
  std::cout << "exit-time: mean " << format_double(stats.mean_exit_time) << " +- "
            << format_double(stats.ci_halfwidth) << " (" << stats.n_censored << "/"
            << stats.n_trials << " censored)\n";
  if (cfg.oracle == OracleKind::Dynkin) {
    if (cfg.dim != 1) {
      throw ConfigError("exit: oracle = dynkin requires dim = 1");
    }
    if ((cfg.initial - cfg.minimizer).norm() != 0.0) {
      throw ConfigError("exit: oracle = dynkin requires the start at the minimizer");
    }
    const double lambda = landscape.sharpness();
    double eps = dynamics.noise_amplitude();
    if (cfg.dynamics != DynamicsKind::ProxySystem) {
      eps *= landscape.covariance_sqrt()(0, 0);
    }
    const double oracle = dynkin_mean_exit_symmetric(lambda, cfg.radius, eps);
    const double rel_error = std::abs(stats.mean_exit_time - oracle) / oracle;
    CsvBuilder csv({"mc_mean", "ci_halfwidth", "oracle_mean", "rel_error"});
    csv.add_row({format_double(stats.mean_exit_time), format_double(stats.ci_halfwidth),
                 format_double(oracle), format_double(rel_error)});
    out.add("oracle_comparison.csv", csv.text());
    std::cout << "oracle: boundary-value mean " << format_double(oracle)
              << ", relative error " << format_double(rel_error) << "\n";
  }
}

void cmd_quasipot(const ConfigData& cfg, RunOutputs& out) {
  const Landscape landscape(landscape_spec(cfg));
  const Domain domain = make_domain(landscape, cfg.radius);
  const std::vector<double> t_grid =
      cfg.t_grid.empty() ? default_t_grid(landscape) : cfg.t_grid;
  const OptimizerSettings settings = optimizer_settings(cfg);
  const QuasiPotentialResult qp =
      quasi_potential(landscape, domain, t_grid, cfg.path_nodes, settings,
                      cfg.metric_exponent, ActionMetric::Covariance);
  const ApproxGapResult gap = approx_gap(landscape, domain, t_grid, cfg.path_nodes,
                                         settings, cfg.metric_exponent);

  out.add("action_scan.csv", csv_action_scan(qp.scan));
  out.add("optimal_path.csv", csv_trajectory(qp.path));
  std::vector<std::string> header = {"v0", "t_opt", "converged"};
  for (int j = 0; j < cfg.dim; ++j) {
    header.push_back("boundary_" + std::to_string(j));
  }
  CsvBuilder summary(header);
  std::vector<std::string> row = {format_double(qp.v0), format_double(qp.t_opt),
                                  format_bool(qp.converged)};
  for (int j = 0; j < cfg.dim; ++j) {
    row.push_back(format_double(qp.boundary_point(j)));
  }
  summary.add_row(row);
  out.add("quasipot.csv", summary.text());
  out.add("gap.csv", csv_gap(gap));
  if (cfg.emit_plots) {
    // One series per boundary candidate, action vs horizon.
    std::vector<PlotSeries> series;
    for (const ActionScanRow& scan_row : qp.scan) {
      while (series.size() <= static_cast<std::size_t>(scan_row.boundary_index)) {
        series.push_back(
            {{}, {}, "boundary " + std::to_string(series.size())});
      }
      auto& s = series[static_cast<std::size_t>(scan_row.boundary_index)];
      // Keep each series sorted by horizon for a sane polyline.
      std::size_t pos = 0;
      while (pos < s.xs.size() && s.xs[pos] < scan_row.T) ++pos;
      s.xs.insert(s.xs.begin() + static_cast<std::ptrdiff_t>(pos), scan_row.T);
      s.ys.insert(s.ys.begin() + static_cast<std::ptrdiff_t>(pos), scan_row.action);
    }
    PlotSpec plot;
    plot.title = "steepness vs horizon";
    plot.x_label = "horizon T";
    plot.y_label = "min steepness";
    plot.log_x = true;
    out.add("action_scan.svg", render_line_plot(plot, series));
  }
  std::cout << "quasipot: v0 " << format_double(qp.v0) << " at horizon "
            << format_double(qp.t_opt) << (qp.converged ? "" : " (not converged)") << "\n";
  std::cout << "gap: |v0 - lambda_max^{-1/2} vhat0| = " << format_double(gap.gap)
            << " (bound factor " << format_double(gap.bound_factor) << ")\n";
}

void add_sweep_outputs(const ConfigData& cfg, const SweepResult& result, RunOutputs& out) {
  out.add("sweep.csv", csv_sweep(result));
  if (cfg.normalize_relaxation) {
    out.add("sweep_normalized.csv", csv_sweep_normalized(result));
  }
  out.add("sweep_summary.csv", csv_fit_summary(result.slope, result.intercept,
                                               result.pearson_r));
  if (cfg.emit_plots) {
    PlotSeries measured;
    measured.label = cfg.normalize_relaxation ? "normalized mean exit time"
                                              : "mean exit time";
    bool positive = true;
    for (const SweepPoint& point : result.points) {
      const double y = cfg.normalize_relaxation ? point.normalized_mean
                                                : point.stats.mean_exit_time;
      measured.xs.push_back(point.regressor);
      measured.ys.push_back(y);
      positive = positive && y > 0.0;
    }
    PlotSpec plot;
    plot.title = sweep_title(cfg.sweep);
    plot.x_label = regressor_label(cfg.sweep);
    plot.y_label = measured.label;
    plot.log_y = positive;
    out.add("sweep.svg", render_line_plot(plot, {measured}));
  }
  std::cout << "sweep: slope " << format_double(result.slope) << " +- "
            << format_double(result.slope_stderr) << ", pearson_r "
            << format_double(result.pearson_r) << "\n";
  if (result.flagged) {
    std::cout << "warning: " << result.flag_reason << "\n";
  }
}

void cmd_sweep(const ConfigData& cfg, RunOutputs& out) {
  add_sweep_outputs(cfg, run_sweep(sweep_spec(cfg)), out);
}

void cmd_proxy_ref(const ConfigData& cfg, RunOutputs& out) {
  ConfigData normalized = cfg;
  normalized.normalize_relaxation = true;  // forced; mirrored in the outputs
  add_sweep_outputs(normalized, proxy_reference(sweep_spec(normalized)), out);
}

void cmd_discretization(const ConfigData& cfg, RunOutputs& out) {
  const DiscretizationResult result =
      discretization_study(run_setup(cfg), cfg.grid, cfg.fine_substeps);
  out.add("discretization.csv", csv_discretization(result));
  out.add("discretization_summary.csv",
          csv_fit_summary(result.slope, result.intercept, result.pearson_r));
  if (cfg.emit_plots) {
    PlotSeries kept;
    kept.label = "|paired mean difference|";
    for (const DiscretizationPoint& point : result.points) {
      if (!point.dropped && point.abs_error > 0.0) {
        kept.xs.push_back(point.eta);
        kept.ys.push_back(point.abs_error);
      }
    }
    if (!kept.xs.empty()) {
      PlotSpec plot;
      plot.title = "discretization error vs eta";
      plot.x_label = "eta";
      plot.y_label = "|E[exit] difference|";
      plot.log_x = true;
      plot.log_y = true;
      out.add("discretization.svg", render_line_plot(plot, {kept}));
    }
  }
  std::cout << "discretization: slope " << format_double(result.slope) << ", pearson_r "
            << format_double(result.pearson_r) << "\n";
  if (result.flagged) {
    std::cout << "warning: " << result.flag_reason << "\n";
  }
}

void cmd_hjcheck(const ConfigData& cfg, RunOutputs& out) {
  const Landscape landscape(landscape_spec(cfg));
  const Domain domain = make_domain(landscape, cfg.radius);
  const int n = cfg.hj_samples;
  CsvBuilder csv({"index", "residual", "scale"});
  double max_abs = 0.0;
  double max_ratio = 0.0;
  for (int i = 0; i < n; ++i) {
    // Deterministic interior points: radii proportional to u^{1/d} fill the
    // ball roughly uniformly along the low-discrepancy directions.
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double rho = domain.radius * std::pow(u, 1.0 / static_cast<double>(cfg.dim));
    const Eigen::VectorXd theta =
        domain.center + rho * sphere_sample(cfg.dim, i);
    Eigen::VectorXd grad_v;
    switch (cfg.hj_field) {
      case HjField::Analytic:
        if (landscape.covariance_model() == CovarianceModel::Identity) {
          grad_v = 2.0 * landscape.gradient(theta);
        } else {
          grad_v = 2.0 * (landscape.covariance_sqrt() * (theta - landscape.minimizer()));
        }
        break;
      case HjField::Zero:
        grad_v = Eigen::VectorXd::Zero(cfg.dim);
        break;
      case HjField::Loss:
        grad_v = landscape.gradient(theta);
        break;
    }
    const double residual = hj_residual(grad_v, landscape, theta);
    const double scale =
        landscape.sharpness() * (theta - landscape.minimizer()).squaredNorm();
    csv.add_row({format_u64(static_cast<std::uint64_t>(i)), format_double(residual),
                 format_double(scale)});
    max_abs = std::max(max_abs, std::abs(residual));
    if (scale > 0.0) {
      max_ratio = std::max(max_ratio, std::abs(residual) / scale);
    }
  }
  out.add("hjcheck.csv", csv.text());
  std::cout << "hjcheck: max |residual| " << format_double(max_abs)
            << ", max |residual|/scale " << format_double(max_ratio) << "\n";
}

void cmd_validate_domain(const ConfigData& cfg, RunOutputs& out) {
  const Landscape landscape(landscape_spec(cfg));
  const Domain domain = make_domain(landscape, cfg.radius);
  const DomainValidationReport report =
      validate_domain(landscape, domain, cfg.validate_samples, cfg.validate_budget);
  CsvBuilder csv({"sample", "inward_ok", "flow_ok"});
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    csv.add_row({format_u64(i), format_bool(report.samples[i].inward_ok),
                 format_bool(report.samples[i].flow_ok)});
  }
  out.add("validation.csv", csv.text());
  std::cout << "validate-domain: " << (report.passed ? "PASS" : "FAIL") << " ("
            << report.samples.size() << " boundary samples)\n";
}

int run(const std::string& subcommand, ConfigData cfg) {
  const auto start = std::chrono::steady_clock::now();
  ManifestData manifest;
  manifest.subcommand = subcommand;
  manifest.status = "running";
  manifest.config = cfg;
  write_manifest(cfg.output_dir, manifest);

  RunOutputs out;
  if (subcommand == "simulate") {
    cmd_simulate(cfg, out);
  } else if (subcommand == "exit-time") {
    cmd_exit_time(cfg, out);
  } else if (subcommand == "quasipot") {
    cmd_quasipot(cfg, out);
  } else if (subcommand == "sweep") {
    cmd_sweep(cfg, out);
  } else if (subcommand == "proxy-ref") {
    cmd_proxy_ref(cfg, out);
  } else if (subcommand == "discretization") {
    cmd_discretization(cfg, out);
  } else if (subcommand == "hjcheck") {
    cmd_hjcheck(cfg, out);
  } else if (subcommand == "validate-domain") {
    cmd_validate_domain(cfg, out);
  } else {
    throw ConfigError("unknown subcommand `" + subcommand + "`");
  }

  const std::filesystem::path dir(cfg.output_dir);
  for (const auto& [name, content] : out.files) {
    write_text_file((dir / name).string(), content);
    manifest.outputs.push_back(name);
  }
  manifest.status = "complete";
  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (subcommand == "proxy-ref") {
    manifest.config.normalize_relaxation = true;  // record what actually ran
  }
  write_manifest(cfg.output_dir, manifest);
  std::cout << "wrote " << manifest.outputs.size() << " files to " << cfg.output_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " " + kVersion +
               ": exit-time laboratory for quadratic basins"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string preset;
  std::string from_manifest;
  std::uint64_t seed = 0;
  std::string output_dir;
  int threads = 0;
  bool emit_plots = false;

  auto* opt_config = app.add_option("--config", config_path, "Config file path");
  auto* opt_preset = app.add_option("--preset", preset, "Built-in preset name");
  auto* opt_manifest = app.add_option("--from-manifest", from_manifest,
                                      "Re-run the configuration recorded in a manifest");
  auto* opt_seed = app.add_option("--seed", seed, "Master RNG seed (overrides config)");
  auto* opt_outdir = app.add_option("--output-dir", output_dir,
                                    "Output directory (overrides config)");
  auto* opt_threads = app.add_option("--threads", threads,
                                     "Worker thread cap (overrides config)");
  app.add_flag("--emit-plots", emit_plots, "Also render SVG plots");
  opt_config->excludes(opt_preset);
  opt_config->excludes(opt_manifest);
  opt_preset->excludes(opt_manifest);

  const std::vector<std::string> names = {"simulate",       "exit-time", "quasipot",
                                          "sweep",          "proxy-ref", "discretization",
                                          "hjcheck",        "validate-domain"};
  const std::vector<std::string> blurbs = {
      "Record one trajectory",
      "Monte Carlo mean exit time",
      "Quasi-potential via minimum-steepness paths",
      "Exit-time scaling sweep",
      "Sharpness-independence reference sweep",
      "Coupled coarse/fine discretization-error study",
      "Hamilton-Jacobi residuals of a candidate field",
      "Check the domain is attracted to the minimizer"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    subs.push_back(app.add_subcommand(names[i], blurbs[i]));
    subs.back()->fallthrough();  // global flags may follow the subcommand
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string subcommand;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) subcommand = names[i];
    }

    ConfigData cfg;
    if (!from_manifest.empty()) {
      LoadedManifest loaded = load_manifest(from_manifest);
      if (!subcommand.empty() && subcommand != loaded.subcommand) {
        throw ConfigError("subcommand `" + subcommand + "` conflicts with manifest's `" +
                          loaded.subcommand + "`");
      }
      subcommand = loaded.subcommand;
      cfg = loaded.config;
    } else if (!preset.empty()) {
      cfg = parse_config(preset_text(preset));
    } else if (!config_path.empty()) {
      cfg = parse_config_file(config_path);
    } else {
      cfg = parse_config("");
    }
    if (subcommand.empty()) {
      throw ConfigError("no subcommand given (and no --from-manifest to supply one)");
    }

    if (*opt_seed) cfg.seed = seed;
    if (*opt_outdir) cfg.output_dir = output_dir;
    if (*opt_threads) {
      if (threads < 1) {
        throw ConfigError("--threads must be at least 1");
      }
      cfg.threads = threads;
    }
    if (emit_plots) cfg.emit_plots = true;

    return run(subcommand, std::move(cfg));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
