#pragma once

#include <optional>
#include <string>
#include <vector>

namespace basel {

// Model parameters. Defaults are the baseline calibration used throughout
// the test suite and the shipped scenario configs.
struct ModelParams {
  double tau = 0.1;        // time step in years
  double delta = 0.5;      // variance estimator decay rate (per year)
  double t_var = 0.1;      // horizon over which returns are annualized
  double sigma0_sq = 1e-6; // variance offset in the leverage target
  double b = -0.5;         // cyclicality exponent; b<0 decreases leverage in volatile times
  double alpha = 0.075;    // risk-limit scale
  double e_bar = 2.27;     // bank equity target
  double w_b = 0.3;        // bank's risky portfolio weight
  double theta = 9.5;      // leverage adjustment rate (per year)
  std::optional<double> theta_minus;  // deleveraging rate; theta when unset
  double eta = 10.0;       // equity redistribution rate (per year)
  double mu = 25.0;        // fundamental value
  double rho = 0.1;        // fund's mean-reversion rate (per year)
  double w_f0 = 0.5;       // fund's equilibrium risky weight

  double theta_down() const { return theta_minus ? *theta_minus : theta; }
};

// Gaussian innovations fed through a GARCH(1,1) variance recursion.
// a0 = a1 = b1 = 0 is the deterministic limit (all shocks zero).
struct GarchParams {
  double a0 = 1e-3;
  double a1 = 0.016;
  double b1 = 0.87;

  bool deterministic() const { return a0 == 0.0 && a1 == 0.0 && b1 == 0.0; }
  bool stationary() const { return a1 + b1 < 1.0; }
  // Unconditional shock variance; a0 if the recursion is non-stationary.
  double stationary_variance() const {
    return stationary() ? a0 / (1.0 - a1 - b1) : a0;
  }
};

// Validation collects every violated constraint rather than stopping at the
// first, so a config error report can show them all at once.
std::vector<std::string> validate(const ModelParams& p);
std::vector<std::string> validate(const GarchParams& g);

}  // namespace basel
