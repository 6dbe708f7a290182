#include "basel/stochastic_stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "basel/garch.hpp"
#include "basel/trajectory.hpp"

namespace basel {

namespace {

struct NoisyRun {
  double exponent = 0.0;
  double mean_target_leverage = 0.0;
  long leverage_samples = 0;
  bool diverged = false;
};

// Tangent-vector Lyapunov estimate and time average of the target leverage
// along one noisy trajectory. The burn-in prefix evolves state and tangent
// but contributes to neither average; the tangent transient in particular
// must settle before the log growth is meaningful.
NoisyRun noisy_run(const ModelParams& p, const GarchParams& garch,
                   std::uint64_t seed, int n_steps, int burn_in) {
  NoisyRun out;
  GarchProcess shocks(garch, seed);
  Vec6d x = default_initial_state(p, garch.stationary_variance());
  Vec6d v = Vec6d::Ones() / std::sqrt(6.0);
  double log_sum = 0.0;
  long steps = 0;
  double lev_sum = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    const double chi = shocks();
    const std::optional<Mat6d> J = jacobian(x, p, chi);
    const StepResult<double> r = step(x, p, chi);
    if (!J || r.tag == StepTag::Diverged) {
      out.diverged = true;
      break;
    }
    v = (*J) * v;
    const double norm = v.norm();
    v /= norm;
    if (i >= burn_in) {
      log_sum += std::log(norm);
      ++steps;
      lev_sum += target_leverage(x[kSigmaSq], p);
      ++out.leverage_samples;
    }
    x = r.next;
  }
  out.exponent = out.diverged ? std::numeric_limits<double>::infinity()
                 : steps > 0 ? log_sum / (double(steps) * p.tau)
                             : 0.0;
  if (out.leverage_samples > 0)
    out.mean_target_leverage = lev_sum / double(out.leverage_samples);
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

StochasticThreshold stochastic_critical_leverage(
    ModelParams p, const GarchParams& garch,
    const std::vector<std::uint64_t>& seeds, int n_steps, int burn_in) {
  StochasticThreshold out;
  for (double a = 1e-4; a <= 1e4 * (1.0 + 1e-12); a *= 1.25) {
    p.alpha = a;
    std::vector<double> exps;
    double lev_sum = 0.0;
    long lev_count = 0;
    for (const std::uint64_t s : seeds) {
      const NoisyRun r = noisy_run(p, garch, s, n_steps, burn_in);
      exps.push_back(r.exponent);
      if (r.leverage_samples > 0) {
        lev_sum += r.mean_target_leverage;
        ++lev_count;
      }
    }
    const double med = median(exps);
    if (med > kLyapunovZero) {
      out.alpha_cross = a;
      out.median_exponent = med;
      out.critical_leverage = lev_count > 0 ? lev_sum / double(lev_count) : 0.0;
      out.found = true;
      return out;
    }
  }
  return out;
}

std::vector<StochasticStabilityRow> stochastic_stability_scan(
    ModelParams p, const GarchParams& garch, const std::vector<double>& b_grid,
    const std::vector<std::uint64_t>& seeds, int n_steps, int burn_in) {
  std::vector<StochasticStabilityRow> rows;
  for (const double b : b_grid) {
    p.b = b;
    StochasticStabilityRow row;
    row.b = b;
    const CriticalAlpha det = critical_alpha(p);
    if (det.found) {
      row.det_alpha_c = det.alpha_c;
      row.det_lambda_c = det.lambda_c;
    }
    const StochasticThreshold st =
        stochastic_critical_leverage(p, garch, seeds, n_steps, burn_in);
    if (st.found) {
      row.stoch_alpha_cross = st.alpha_cross;
      row.stoch_lambda_c = st.critical_leverage;
      row.median_exponent = st.median_exponent;
    }
    row.found = det.found && st.found;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace basel
