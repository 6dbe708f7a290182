#pragma once

#include <cmath>
#include <limits>

#include "basel/params.hpp"
#include "basel/types.hpp"

namespace basel {

inline constexpr double kClearingFloor = 1e-12;
inline constexpr double kWfClampLo = 1e-6;
inline constexpr double kWfClampHi = 1.0 - 1e-6;
// Cap on the bank's initial ownership used when countercyclical leverage
// targets explode at small variance.
inline constexpr double kEntryOwnershipCap = 0.1;

// Balance-sheet quantities implied by a state before the next trade.
template <class S>
struct Derived {
  S assets_bank;      // A_B = p n / w_b
  S equity;           // E_B = A_B - L_B
  S target_leverage;  // alpha (sigma_sq + sigma0_sq)^b
  S leverage;         // A_B / E_B; +inf sentinel when E_B <= 0
  S delta_b;          // bank's asset adjustment executed this step
  S kappa_b;          // equity flow into the bank; kappa_f = -kappa_b
  S cash_bank;        // c_B, bank's non-risky holdings plus equity flow
  S cash_fund;        // c_F
  S assets_fund;      // A_F = (1 - n) p / w_f
  S relative_size;    // A_B / A_F
  bool insolvent;     // E_B <= 0
};

template <class S>
S target_leverage(S sigma_sq, const ModelParams& p) {
  using std::pow;
  return p.alpha * pow(sigma_sq + p.sigma0_sq, p.b);
}

template <class S>
Derived<S> derive(const Vec6<S>& x, const ModelParams& p) {
  using std::pow;
  Derived<S> d;
  const S price = x[kPrice];
  const S n = x[kN];
  d.assets_bank = price * n / p.w_b;
  d.equity = d.assets_bank - x[kLB];
  d.target_leverage = target_leverage(x[kSigmaSq], p);
  d.insolvent = !(d.equity > S(0));
  d.leverage = d.insolvent ? S(std::numeric_limits<double>::infinity())
                           : d.assets_bank / d.equity;
  const S gap = d.target_leverage * d.equity - d.assets_bank;
  const double th = gap < S(0) ? p.theta_down() : p.theta;
  d.delta_b = p.tau * th * gap;
  d.kappa_b = p.tau * p.eta * (p.e_bar - d.equity);
  d.cash_bank = (1.0 - p.w_b) * n * price / p.w_b + d.kappa_b;
  d.cash_fund = (1.0 - x[kWF]) * (1.0 - n) * price / x[kWF] - d.kappa_b;
  d.assets_fund = (1.0 - n) * price / x[kWF];
  d.relative_size = d.assets_bank / d.assets_fund;
  return d;
}

template <class S>
struct StepResult {
  Vec6<S> next;
  Derived<S> derived;      // quantities at the pre-step state
  bool clamped = false;    // fund weight hit the [1e-6, 1-1e-6] clamp
  bool n_excursion = false;  // ownership left [0, 1]
  StepTag tag = StepTag::Live;
  DivergeReason reason = DivergeReason::None;
};

// One step of the map. chi is the fund's wealth shock for this step; the
// sqrt(tau) scaling is applied here, so callers pass the raw draw.
template <class S>
StepResult<S> step(const Vec6<S>& x, const ModelParams& p, double chi = 0.0) {
  using std::isfinite;
  using std::log;
  using std::sqrt;
  StepResult<S> r;
  r.derived = derive(x, p);
  const Derived<S>& d = r.derived;

  const S price = x[kPrice];
  const S n = x[kN];

  const S ret = log(price / x[kPLag]) * (p.t_var / p.tau);
  const S sigma_next =
      (1.0 - p.tau * p.delta) * x[kSigmaSq] + p.tau * p.delta * ret * ret;

  S wf_next = x[kWF] + (x[kWF] / price) *
                           (p.tau * p.rho * (p.mu - price) + sqrt(p.tau) * chi);
  if (wf_next < S(kWfClampLo)) {
    wf_next = S(kWfClampLo);
    r.clamped = true;
  } else if (wf_next > S(kWfClampHi)) {
    wf_next = S(kWfClampHi);
    r.clamped = true;
  }

  const S denom = 1.0 - p.w_b * n - (1.0 - n) * wf_next;
  if (!(denom > S(kClearingFloor))) {
    r.tag = StepTag::Diverged;
    r.reason = DivergeReason::ClearingDenominator;
    return r;
  }
  const S price_next =
      (p.w_b * (d.cash_bank + d.delta_b) + wf_next * d.cash_fund) / denom;
  if (!(price_next > S(0))) {
    r.tag = StepTag::Diverged;
    r.reason = isfinite(double(price_next)) ? DivergeReason::NonPositivePrice
                                            : DivergeReason::NonFinite;
    return r;
  }

  const S n_next = p.w_b * (n * price_next + d.cash_bank + d.delta_b) / price_next;

  r.next[kSigmaSq] = sigma_next;
  r.next[kWF] = wf_next;
  r.next[kPrice] = price_next;
  r.next[kN] = n_next;
  r.next[kLB] = x[kLB] + d.delta_b;
  r.next[kPLag] = price;
  for (int i = 0; i < 6; ++i) {
    if (!isfinite(double(r.next[i]))) {
      r.tag = StepTag::Diverged;
      r.reason = DivergeReason::NonFinite;
      return r;
    }
  }
  if (n_next < S(0) || n_next > S(1)) r.n_excursion = true;
  return r;
}

// Entry state on the balance sheet consistent with the leverage target at the
// entry variance: n and L_B are chosen so the bank starts exactly on target
// with equity at e_bar and the price a small displacement above fundamental.
Vec6d default_initial_state(const ModelParams& p, double entry_variance = 0.0);

}  // namespace basel
