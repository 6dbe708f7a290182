#pragma once

#include <cstdint>
#include <vector>

#include "basel/params.hpp"
#include "basel/stability.hpp"

namespace basel {

// Numerical zero for the stochastic exponent's sign test. The fixed-point
// line's neutral direction keeps the measured exponent pinned a little above
// zero even deep in the stable region, so a literal sign change never fires.
inline constexpr double kLyapunovZero = 1e-2;  // per year

struct StochasticThreshold {
  double alpha_cross = 0.0;       // first grid alpha with positive exponent
  double critical_leverage = 0.0; // time-averaged target leverage there
  double median_exponent = 0.0;   // across seeds at the crossing
  bool found = false;
};

// Walks the same geometric alpha grid as critical_alpha, running the noisy
// Lyapunov estimate for each seed, until the seed-median exponent rises
// above the numerical zero. The threshold leverage is the seed-averaged time
// mean of the target leverage at the crossing alpha.
StochasticThreshold stochastic_critical_leverage(
    ModelParams p, const GarchParams& garch,
    const std::vector<std::uint64_t>& seeds, int n_steps = 3000,
    int burn_in = 500);

struct StochasticStabilityRow {
  double b = 0.0;
  double det_alpha_c = 0.0;
  double det_lambda_c = 0.0;        // deterministic critical leverage
  double stoch_alpha_cross = 0.0;
  double stoch_lambda_c = 0.0;      // stochastic critical leverage
  double median_exponent = 0.0;
  bool found = false;
};

std::vector<StochasticStabilityRow> stochastic_stability_scan(
    ModelParams p, const GarchParams& garch, const std::vector<double>& b_grid,
    const std::vector<std::uint64_t>& seeds, int n_steps = 3000,
    int burn_in = 500);

}  // namespace basel
