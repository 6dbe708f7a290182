#include "basel/model.hpp"

#include <algorithm>
#include <cmath>

#include "basel/trajectory.hpp"

namespace basel {

const char* to_string(DivergeReason r) {
  switch (r) {
    case DivergeReason::None: return "none";
    case DivergeReason::ClearingDenominator: return "clearing_denominator";
    case DivergeReason::NonPositivePrice: return "non_positive_price";
    case DivergeReason::NonFinite: return "non_finite";
  }
  return "unknown";
}

Vec6d default_initial_state(const ModelParams& p, double entry_variance) {
  double s2 = std::max({p.sigma0_sq, 1e-6, entry_variance});
  double lb = target_leverage(s2, p);
  // Under a countercyclical target the near-zero entry variance can imply an
  // ownership share that swamps the market. Cap it and back out the variance
  // that puts the bank on target at the cap.
  if (p.b < 0.0 && lb * p.e_bar * p.w_b / p.mu > kEntryOwnershipCap) {
    lb = kEntryOwnershipCap * p.mu / (p.e_bar * p.w_b);
    s2 = std::pow(lb / p.alpha, 1.0 / p.b) - p.sigma0_sq;
  }
  Vec6d x;
  x[kSigmaSq] = s2;
  x[kWF] = p.w_f0;
  x[kPrice] = p.mu * (1.0 + 1e-3);
  x[kN] = lb * p.e_bar * p.w_b / p.mu;
  x[kLB] = (lb - 1.0) * p.e_bar;
  x[kPLag] = p.mu;
  return x;
}

Trajectory simulate(const Vec6d& x0, const ModelParams& p, GarchProcess& shocks,
                    int n_steps) {
  Trajectory t;
  t.tau = p.tau;
  t.rows.reserve(std::size_t(n_steps));
  Vec6d x = x0;
  for (int i = 0; i < n_steps; ++i) {
    const double chi = shocks();
    StepResult<double> r = step(x, p, chi);
    TrajectoryRow row{x, r.derived, r.clamped, r.n_excursion};
    t.rows.push_back(row);
    if (r.clamped) ++t.clamp_count;
    if (r.n_excursion) ++t.n_excursions;
    if (r.derived.insolvent) ++t.insolvent_steps;
    if (r.tag == StepTag::Diverged) {
      t.final_tag = StepTag::Diverged;
      t.reason = r.reason;
      t.final_state = x;
      t.final_derived = r.derived;
      return t;
    }
    x = r.next;
  }
  t.final_state = x;
  t.final_derived = derive(x, p);
  return t;
}

Trajectory simulate(const Vec6d& x0, const ModelParams& p, int n_steps) {
  GarchProcess none(GarchParams{0.0, 0.0, 0.0}, 0);
  return simulate(x0, p, none, n_steps);
}

std::vector<std::string> validate(const ModelParams& p) {
  std::vector<std::string> errs;
  auto req = [&](bool ok, const char* msg) {
    if (!ok) errs.emplace_back(msg);
  };
  req(p.tau > 0.0, "tau must be positive");
  req(p.delta >= 0.0, "delta must be non-negative");
  req(!(p.tau > 0.0) || p.tau * p.delta <= 1.0,
      "tau*delta must not exceed 1 (variance estimator weight)");
  req(p.t_var > 0.0, "t_var must be positive");
  req(p.sigma0_sq > 0.0, "sigma0_sq must be positive");
  req(p.b >= -0.5 && p.b <= 0.5, "b must lie in [-0.5, 0.5]");
  req(p.alpha > 0.0, "alpha must be positive");
  req(p.e_bar > 0.0, "e_bar must be positive");
  req(p.w_b > 0.0 && p.w_b < 1.0, "w_b must lie in (0, 1)");
  req(p.theta >= 0.0, "theta must be non-negative");
  req(!p.theta_minus || *p.theta_minus >= 0.0,
      "theta_minus must be non-negative");
  req(p.eta >= 0.0, "eta must be non-negative");
  req(p.mu > 0.0, "mu must be positive");
  req(p.rho >= 0.0, "rho must be non-negative");
  req(!(p.tau > 0.0) || p.tau * p.rho < 1.0, "tau*rho must be below 1");
  req(p.w_f0 > 0.0 && p.w_f0 < 1.0, "w_f0 must lie in (0, 1)");
  return errs;
}

std::vector<std::string> validate(const GarchParams& g) {
  std::vector<std::string> errs;
  if (g.a0 < 0.0) errs.emplace_back("a0 must be non-negative");
  if (g.a1 < 0.0) errs.emplace_back("a1 must be non-negative");
  if (g.b1 < 0.0) errs.emplace_back("b1 must be non-negative");
  return errs;
}

}  // namespace basel
