#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "basel/params.hpp"
#include "basel/stability.hpp"

namespace basel {

// Calibration targets: time-averaged target leverage and relative bank size,
// each matched within 1% by adjusting alpha and e_bar.
struct TargetSpec {
  double lambda_hat = 5.8;
  double r_hat = 0.27;
  double b = -0.5;
  std::vector<std::uint64_t> seeds;
  int t_len = 5000;
  int burn_in = 500;
};

struct MatchResult {
  double alpha = 0.0;
  double e_bar = 0.0;
  double achieved_lambda = 0.0;
  double achieved_r = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;  // "ok", "diverged", "max_iterations"
};

// Damped Broyden iteration in (log alpha, log e_bar) on the log-ratio
// residuals, each evaluation a seed-averaged simulation. Initialized from
// the fixed-point relations between leverage, equity, and relative size.
MatchResult match_targets(const TargetSpec& spec, ModelParams params,
                          const GarchParams& garch);

struct SweepRow {
  double b = 0.0;
  double alpha = 0.0;
  double e_bar = 0.0;
  double mean_leverage = 0.0;
  double mean_r = 0.0;
  double rs_q = 0.0;
  double rs_normalized = 0.0;
  std::string status;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double b_star = 0.0;   // argmin of normalized shortfall
  bool b_star_valid = false;
};

// For each b in the grid: calibrate to the targets, simulate each seed at
// the calibrated parameters, and report the seed-averaged realized
// shortfall, normalized by the b = -0.5 row. Infeasible cells keep their
// status and contribute no shortfall. The argmin is refined by a quadratic
// through the three lowest cells when they are interior and consecutive.
SweepResult policy_sweep(const std::vector<double>& b_grid, TargetSpec spec,
                         const GarchParams& garch, ModelParams params,
                         double q, int threads = 1);

struct BifurcationCell {
  double b;
  double alpha;
  double lambda_star;
  Regime regime;
};

struct BifurcationResult {
  std::vector<BifurcationCell> cells;
  std::vector<CriticalAlpha> boundary;  // one per b, same order as b_grid
  std::vector<double> b_grid;
};

BifurcationResult bifurcation_scan(const std::vector<double>& b_grid,
                                   const std::vector<double>& alpha_grid,
                                   ModelParams params, int threads = 1);

struct ThetaSweepRow {
  double theta_tau;
  double lambda_c;
  double r_c;
  bool found;
};

// Critical leverage and critical relative size as the balance-sheet
// adjustment speed varies, holding tau fixed.
std::vector<ThetaSweepRow> theta_sweep(const std::vector<double>& theta_tau_grid,
                                       ModelParams params);

// Quadratic-fit argmin through the three lowest points of (x, y); falls back
// to the grid argmin when they are not consecutive interior points or the
// fit degenerates. NaN y-values are ignored.
double refine_argmin(const std::vector<double>& xs,
                     const std::vector<double>& ys);

std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> geomspace(double lo, double hi, int n);

}  // namespace basel
