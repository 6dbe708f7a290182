#include "basel/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "basel/csv.hpp"
#include "basel/experiments.hpp"
#include "basel/garch.hpp"
#include "basel/risk.hpp"
#include "basel/stochastic_stability.hpp"
#include "basel/trajectory.hpp"

namespace basel {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitCalibration = 3;
constexpr int kExitConfig = 4;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> b;
  std::optional<double> alpha;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "config file (key = value)");
  cmd->add_option("--seed", opts.seed, "override seed");
  cmd->add_option("--b", opts.b, "override cyclicality exponent");
  cmd->add_option("--alpha", opts.alpha, "override risk-limit scale");
  cmd->add_option("--out", opts.out, "output CSV path");
}

// Loads the config file if given, applies flag overrides, and validates.
// On failure prints each error with its line number and returns false.
bool load_config(const CommonOpts& opts, const std::string& default_out,
                 RunConfig& cfg) {
  std::string text;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config " << opts.config_path << "\n";
      return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  ParseOutcome parsed = parse_config(text);
  if (opts.seed) parsed.config.seed = *opts.seed;
  if (opts.b) parsed.config.model.b = *opts.b;
  if (opts.alpha) parsed.config.model.alpha = *opts.alpha;
  if (!opts.out.empty()) parsed.config.out = opts.out;
  if (parsed.config.out.empty()) parsed.config.out = default_out;
  // Re-validate after overrides; overrides carry no config line numbers.
  if (parsed.ok()) {
    for (const std::string& msg : validate(parsed.config.model))
      parsed.errors.push_back({0, msg});
    for (const std::string& msg : validate(parsed.config.garch))
      parsed.errors.push_back({0, msg});
  }
  if (!parsed.ok()) {
    for (const ConfigError& e : parsed.errors) {
      std::cerr << "config error";
      if (e.line > 0) std::cerr << " (line " << e.line << ")";
      std::cerr << ": " << e.message << "\n";
    }
    return false;
  }
  cfg = parsed.config;
  return true;
}

int write_outputs(const RunConfig& cfg, const std::string& csv,
                  const std::string& status, int exit_code) {
  std::string err;
  if (!write_file_atomic(cfg.out, csv, &err)) {
    std::cerr << "error: " << err << "\n";
    return kExitIo;
  }
  const std::string manifest =
      manifest_text(cfg, kToolVersion, utc_timestamp(), status);
  if (!write_file_atomic(cfg.out + ".manifest", manifest, &err)) {
    std::cerr << "error: " << err << "\n";
    return kExitIo;
  }
  return exit_code;
}

int resolve_threads(int threads_flag) {
  if (threads_flag > 0) return threads_flag;
  if (const char* env = std::getenv("BASEL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::vector<std::uint64_t> seed_block(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(base + std::uint64_t(i));
  return seeds;
}

std::string fmt_regime(Regime r) { return to_string(r); }

int cmd_simulate(const CommonOpts& opts) {
  RunConfig cfg;
  if (!load_config(opts, "trajectory.csv", cfg)) return kExitConfig;
  GarchProcess shocks(cfg.garch, cfg.seed);
  const Vec6d x0 =
      default_initial_state(cfg.model, cfg.garch.stationary_variance());
  const Trajectory t = simulate(x0, cfg.model, shocks, cfg.n_steps);
  std::string status = "completed";
  int code = kExitOk;
  if (t.diverged()) {
    status = std::string("diverged:") + to_string(t.reason) + " at step " +
             std::to_string(t.rows.size() - 1);
    code = kExitDiverged;
  }
  std::cout << "simulate: " << t.rows.size() << " steps recorded, " << status
            << ", clamps " << t.clamp_count << ", insolvent steps "
            << t.insolvent_steps << " -> " << cfg.out << "\n";
  return write_outputs(cfg, trajectory_csv(t), status, code);
}

int cmd_fixed_point(const CommonOpts& opts) {
  RunConfig cfg;
  if (!load_config(opts, "fixed_point.csv", cfg)) return kExitConfig;
  const FixedPoint fp = find_fixed_point(cfg.model);
  std::vector<std::vector<std::string>> rows{
      {format_double(cfg.model.b), format_double(cfg.model.alpha),
       format_double(fp.lambda_star), format_double(fp.x[kN]),
       format_double(fp.x[kLB]), format_double(fp.r_star),
       fp.feasible ? "1" : "0"}};
  std::cout << "fixed-point: lambda_star " << format_double(fp.lambda_star)
            << ", n " << format_double(fp.x[kN]) << ", r_star "
            << format_double(fp.r_star)
            << (fp.feasible ? "" : " (infeasible)") << " -> " << cfg.out
            << "\n";
  return write_outputs(
      cfg, table_csv("b,alpha,lambda_star,n_star,l_star,r_star,feasible", rows),
      "completed", kExitOk);
}

int cmd_stability(const CommonOpts& opts) {
  RunConfig cfg;
  if (!load_config(opts, "stability.csv", cfg)) return kExitConfig;
  const FixedPoint fp = find_fixed_point(cfg.model);
  const std::optional<Mat6d> J = jacobian(fp.x, cfg.model);
  if (!J) {
    std::cerr << "error: Jacobian probe left the domain\n";
    return kExitDiverged;
  }
  const auto ev = eigenvalues(*J);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < ev.size(); ++i)
    rows.push_back({std::to_string(i), format_double(ev[i].real()),
                    format_double(ev[i].imag()),
                    format_double(std::abs(ev[i]))});
  const double transverse = transverse_spectral_radius(*J);
  const Regime regime = classify_regime(cfg.model);
  std::cout << "stability: spectral radius "
            << format_double(std::abs(ev[0])) << ", transverse "
            << format_double(transverse) << ", regime " << fmt_regime(regime)
            << " -> " << cfg.out << "\n";
  return write_outputs(cfg, table_csv("index,re,im,modulus", rows), "completed",
                       kExitOk);
}

int cmd_critical_alpha(const CommonOpts& opts) {
  RunConfig cfg;
  if (!load_config(opts, "critical_alpha.csv", cfg)) return kExitConfig;
  const CriticalAlpha c = critical_alpha(cfg.model);
  if (!c.found) {
    std::cerr << "error: no critical alpha bracket in [1e-4, 1e4]\n";
    return kExitCalibration;
  }
  std::vector<std::vector<std::string>> rows{
      {format_double(cfg.model.b), format_double(c.alpha_c),
       format_double(c.lambda_c), format_double(c.r_c)}};
  std::cout << "critical-alpha: alpha_c " << format_double(c.alpha_c)
            << ", lambda_c " << format_double(c.lambda_c) << ", r_c "
            << format_double(c.r_c) << " -> " << cfg.out << "\n";
  return write_outputs(cfg, table_csv("b,alpha_c,lambda_c,r_c", rows),
                       "completed", kExitOk);
}

int cmd_lyapunov(const CommonOpts& opts) {
  RunConfig cfg;
  if (!load_config(opts, "lyapunov.csv", cfg)) return kExitConfig;
  GarchProcess shocks(cfg.garch, cfg.seed);
  const Vec6d x0 =
      default_initial_state(cfg.model, cfg.garch.stationary_variance());
  const LyapunovResult r =
      lyapunov_leading(x0, cfg.model, shocks, cfg.n_steps, cfg.burn_in);
  std::vector<std::vector<std::string>> rows{
      {format_double(cfg.model.b), format_double(cfg.model.alpha),
       std::to_string(cfg.seed), std::to_string(r.steps),
       format_double(r.exponent), r.diverged ? "1" : "0"}};
  std::cout << "lyapunov: exponent " << format_double(r.exponent)
            << " per year over " << r.steps << " steps"
            << (r.diverged ? " (diverged)" : "") << " -> " << cfg.out << "\n";
  return write_outputs(cfg,
                       table_csv("b,alpha,seed,steps,exponent_per_year,diverged",
                                 rows),
                       r.diverged ? "diverged" : "completed",
                       r.diverged ? kExitDiverged : kExitOk);
}

int cmd_bifurcation(const CommonOpts& opts, int threads_flag) {
  RunConfig cfg;
  if (!load_config(opts, "bifurcation.csv", cfg)) return kExitConfig;
  const std::vector<double> b_grid = linspace(-0.5, 0.5, 21);
  const std::vector<double> alpha_grid = geomspace(1e-3, 10.0, 21);
  const BifurcationResult res = bifurcation_scan(
      b_grid, alpha_grid, cfg.model, resolve_threads(threads_flag));
  std::vector<std::vector<std::string>> rows;
  for (const BifurcationCell& c : res.cells)
    rows.push_back({format_double(c.b), format_double(c.alpha),
                    format_double(c.lambda_star), fmt_regime(c.regime)});
  std::vector<std::vector<std::string>> brows;
  for (std::size_t i = 0; i < res.b_grid.size(); ++i) {
    const CriticalAlpha& c = res.boundary[i];
    brows.push_back({format_double(res.b_grid[i]),
                     c.found ? format_double(c.alpha_c) : "nan",
                     c.found ? format_double(c.lambda_c) : "nan"});
  }
  const std::filesystem::path p(cfg.out);
  const std::string boundary_path =
      (p.parent_path() / (p.stem().string() + ".boundary.csv")).string();
  std::string err;
  if (!write_file_atomic(boundary_path,
                         table_csv("b,alpha_c,lambda_c", brows), &err)) {
    std::cerr << "error: " << err << "\n";
    return kExitIo;
  }
  std::cout << "bifurcation: " << rows.size() << " cells -> " << cfg.out
            << ", boundary -> " << boundary_path << "\n";
  return write_outputs(cfg, table_csv("b,alpha,lambda_star,regime", rows),
                       "completed", kExitOk);
}

int cmd_policy_sweep(const CommonOpts& opts, int threads_flag,
                     const std::string& scenario, double r_hat_flag,
                     double lambda_hat_flag, int n_seeds) {
  RunConfig cfg;
  if (!load_config(opts, "policy_sweep.csv", cfg)) return kExitConfig;
  TargetSpec spec;
  GarchParams garch = cfg.garch;
  if (!scenario.empty()) {
    if (scenario == "micro") {
      garch = {1e-3, 0.04, 0.95};
      spec.r_hat = 1e-5;
    } else if (scenario == "mixed") {
      garch = {1e-3, 0.016, 0.874};
      spec.r_hat = 0.1;
    } else if (scenario == "macro") {
      garch = {1e-3, 0.016, 0.874};
      spec.r_hat = 0.27;
    } else {
      std::cerr << "error: unknown scenario '" << scenario
                << "' (micro, mixed, macro)\n";
      return kExitConfig;
    }
  }
  if (r_hat_flag > 0.0) spec.r_hat = r_hat_flag;
  if (lambda_hat_flag > 0.0) spec.lambda_hat = lambda_hat_flag;
  spec.t_len = cfg.n_steps;
  spec.burn_in = cfg.burn_in;
  spec.seeds = seed_block(cfg.seed, n_seeds);
  const std::vector<double> b_grid = linspace(-0.5, 0.5, 21);
  const SweepResult res = policy_sweep(b_grid, spec, garch, cfg.model, cfg.q,
                                       resolve_threads(threads_flag));
  std::vector<std::vector<std::string>> rows;
  for (const SweepRow& r : res.rows)
    rows.push_back({format_double(r.b), format_double(r.alpha),
                    format_double(r.e_bar), format_double(r.mean_leverage),
                    format_double(r.mean_r), format_double(r.rs_q),
                    format_double(r.rs_normalized), r.status});
  const std::string csv = table_csv(
      "b,alpha,e_bar,mean_leverage,mean_r,rs_q,rs_normalized,status", rows);
  if (!res.b_star_valid) {
    std::cerr << "error: reference cell b = -0.5 failed; no normalization\n";
    // Emit the table anyway so the failure is inspectable.
    write_outputs(cfg, csv, "calibration_failed", kExitCalibration);
    return kExitCalibration;
  }
  std::cout << "policy-sweep: b_star " << format_double(res.b_star) << " -> "
            << cfg.out << "\n";
  return write_outputs(cfg, csv, "completed", kExitOk);
}

int cmd_theta_sweep(const CommonOpts& opts, std::vector<double> grid) {
  RunConfig cfg;
  if (!load_config(opts, "theta_sweep.csv", cfg)) return kExitConfig;
  if (grid.empty()) grid = {0.5, 0.95, 1.5};
  const auto rows_data = theta_sweep(grid, cfg.model);
  std::vector<std::vector<std::string>> rows;
  bool any_found = false;
  for (const ThetaSweepRow& r : rows_data) {
    any_found = any_found || r.found;
    rows.push_back({format_double(r.theta_tau),
                    r.found ? format_double(r.lambda_c) : "nan",
                    r.found ? format_double(r.r_c) : "nan",
                    r.found ? "1" : "0"});
  }
  std::cout << "theta-sweep: " << rows.size() << " rows -> " << cfg.out
            << "\n";
  return write_outputs(cfg, table_csv("theta_tau,lambda_c,r_c,found", rows),
                       any_found ? "completed" : "bracket_failed",
                       any_found ? kExitOk : kExitCalibration);
}

int cmd_stochastic_stability(const CommonOpts& opts, std::vector<double> b_grid,
                             int n_seeds) {
  RunConfig cfg;
  if (!load_config(opts, "stochastic_stability.csv", cfg)) return kExitConfig;
  if (b_grid.empty()) b_grid = {-0.5, -0.4, -0.3, -0.2, -0.1};
  GarchParams garch = cfg.garch;
  if (garch.deterministic())
    garch = GarchParams{};  // the scan needs noise; fall back to defaults
  const auto rows_data =
      stochastic_stability_scan(cfg.model, garch, b_grid,
                                seed_block(cfg.seed, n_seeds));
  std::vector<std::vector<std::string>> rows;
  bool any_found = false;
  for (const StochasticStabilityRow& r : rows_data) {
    any_found = any_found || r.found;
    rows.push_back({format_double(r.b), format_double(r.det_alpha_c),
                    format_double(r.det_lambda_c),
                    format_double(r.stoch_alpha_cross),
                    format_double(r.stoch_lambda_c),
                    format_double(r.median_exponent), r.found ? "1" : "0"});
  }
  std::cout << "stochastic-stability: " << rows.size() << " rows -> "
            << cfg.out << "\n";
  return write_outputs(
      cfg,
      table_csv("b,det_alpha_c,det_lambda_c,stoch_alpha_cross,stoch_lambda_c,"
                "median_exponent,found",
                rows),
      any_found ? "completed" : "bracket_failed",
      any_found ? kExitOk : kExitCalibration);
}

int cmd_poincare(const CommonOpts& opts, double plane) {
  RunConfig cfg;
  if (!load_config(opts, "poincare.csv", cfg)) return kExitConfig;
  GarchProcess shocks(cfg.garch, cfg.seed);
  const Vec6d x0 =
      default_initial_state(cfg.model, cfg.garch.stationary_variance());
  const Trajectory t = simulate(x0, cfg.model, shocks, cfg.n_steps);
  const auto pts = poincare_section(t, plane);
  std::vector<std::vector<std::string>> rows;
  for (const PoincarePoint& pt : pts)
    rows.push_back({format_double(pt.sigma_sq), format_double(pt.n)});
  std::cout << "poincare: " << pts.size() << " crossings of price "
            << format_double(plane) << " -> " << cfg.out << "\n";
  const bool div = t.diverged();
  return write_outputs(cfg, table_csv("sigma_sq,n", rows),
                       div ? "diverged" : "completed",
                       div ? kExitDiverged : kExitOk);
}

int cmd_risk(const CommonOpts& opts) {
  RunConfig cfg;
  if (!load_config(opts, "risk.csv", cfg)) return kExitConfig;
  GarchProcess shocks(cfg.garch, cfg.seed);
  const Vec6d x0 =
      default_initial_state(cfg.model, cfg.garch.stationary_variance());
  const Trajectory t = simulate(x0, cfg.model, shocks, cfg.n_steps);
  if (t.diverged()) {
    std::cerr << "error: trajectory diverged (" << to_string(t.reason)
              << ") at step " << t.rows.size() - 1 << "\n";
    return kExitDiverged;
  }
  std::vector<double> rets = equity_log_returns(t);
  if (std::size_t(cfg.burn_in) < rets.size())
    rets.erase(rets.begin(), rets.begin() + cfg.burn_in);
  const double rs = realized_shortfall(rets, cfg.q);
  std::vector<double> prices;
  for (std::size_t i = std::size_t(cfg.burn_in); i < t.rows.size(); ++i)
    prices.push_back(t.rows[i].state[kPrice]);
  const CycleStats cs = cycle_stats(prices, cfg.model.tau);
  double lev_sum = 0.0, tgt_sum = 0.0;
  long count = 0;
  for (std::size_t i = std::size_t(cfg.burn_in); i < t.rows.size(); ++i) {
    if (!t.rows[i].derived.insolvent) {
      lev_sum += t.rows[i].derived.leverage;
      tgt_sum += t.rows[i].derived.target_leverage;
      ++count;
    }
  }
  std::vector<std::vector<std::string>> rows{
      {format_double(rs), format_double(cfg.q), format_double(cs.mean_period),
       format_double(cs.peak_to_trough), std::to_string(cs.n_peaks),
       count ? format_double(lev_sum / double(count)) : "nan",
       count ? format_double(tgt_sum / double(count)) : "nan",
       std::to_string(t.insolvent_steps), std::to_string(t.clamp_count)}};
  std::cout << "risk: rs_q " << format_double(rs) << ", period "
            << format_double(cs.mean_period) << "y, peak_to_trough "
            << format_double(cs.peak_to_trough) << " -> " << cfg.out << "\n";
  return write_outputs(
      cfg,
      table_csv("rs_q,q,mean_period_years,peak_to_trough,n_peaks,"
                "mean_leverage,mean_target_leverage,insolvent_steps,"
                "clamp_count",
                rows),
      "completed", kExitOk);
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"Leverage-cycle simulator and analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  int threads_flag = 0;
  std::string scenario;
  double r_hat_flag = 0.0, lambda_hat_flag = 0.0;
  int n_seeds = 16;
  int n_seeds_stoch = 8;
  std::vector<double> theta_grid;
  std::vector<double> b_grid;
  double plane = 20.0;

  CLI::App* simulate = app.add_subcommand("simulate", "run one trajectory");
  add_common(simulate, opts);
  CLI::App* fixed_point =
      app.add_subcommand("fixed-point", "equilibrium balance sheet");
  add_common(fixed_point, opts);
  CLI::App* stability =
      app.add_subcommand("stability", "eigenvalues at the fixed point");
  add_common(stability, opts);
  CLI::App* crit =
      app.add_subcommand("critical-alpha", "stability boundary in alpha");
  add_common(crit, opts);
  CLI::App* lyap =
      app.add_subcommand("lyapunov", "leading Lyapunov exponent");
  add_common(lyap, opts);
  CLI::App* bif = app.add_subcommand("bifurcation", "regime scan over (b, alpha)");
  add_common(bif, opts);
  bif->add_option("--threads", threads_flag, "worker threads");
  CLI::App* sweep =
      app.add_subcommand("policy-sweep", "realized shortfall across b");
  add_common(sweep, opts);
  sweep->add_option("--threads", threads_flag, "worker threads");
  sweep->add_option("--scenario", scenario, "micro, mixed, or macro preset");
  sweep->add_option("--r-hat", r_hat_flag, "relative size target");
  sweep->add_option("--lambda-hat", lambda_hat_flag, "leverage target");
  sweep->add_option("--seeds", n_seeds, "seeds per cell");
  CLI::App* theta =
      app.add_subcommand("theta-sweep", "critical leverage vs adjustment speed");
  add_common(theta, opts);
  theta->add_option("--grid", theta_grid, "theta*tau values");
  CLI::App* stoch = app.add_subcommand("stochastic-stability",
                                       "noisy stability thresholds across b");
  add_common(stoch, opts);
  stoch->add_option("--b-grid", b_grid, "b values");
  stoch->add_option("--seeds", n_seeds_stoch, "seeds per alpha");
  CLI::App* poincare =
      app.add_subcommand("poincare", "section at upward price crossings");
  add_common(poincare, opts);
  poincare->add_option("--plane", plane, "price plane");
  CLI::App* risk = app.add_subcommand("risk", "shortfall and cycle statistics");
  add_common(risk, opts);

  std::vector<std::string> argv_copy = args;
  std::vector<const char*> argv;
  argv.push_back("basel");
  for (const std::string& a : argv_copy) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (simulate->parsed()) return cmd_simulate(opts);
  if (fixed_point->parsed()) return cmd_fixed_point(opts);
  if (stability->parsed()) return cmd_stability(opts);
  if (crit->parsed()) return cmd_critical_alpha(opts);
  if (lyap->parsed()) return cmd_lyapunov(opts);
  if (bif->parsed()) return cmd_bifurcation(opts, threads_flag);
  if (sweep->parsed())
    return cmd_policy_sweep(opts, threads_flag, scenario, r_hat_flag,
                            lambda_hat_flag, n_seeds);
  if (theta->parsed()) return cmd_theta_sweep(opts, theta_grid);
  if (stoch->parsed()) return cmd_stochastic_stability(opts, b_grid, n_seeds_stoch);
  if (poincare->parsed()) return cmd_poincare(opts, plane);
  if (risk->parsed()) return cmd_risk(opts);
  return kExitConfig;
}

}  // namespace basel
