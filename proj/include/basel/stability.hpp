#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "basel/fixed_point.hpp"
#include "basel/model.hpp"

namespace basel {

// Numeric Jacobian of one map step by central differences, with the shock
// held fixed. Per-coordinate step max(h, h|x_j|). Empty if any probe step
// leaves the domain.
std::optional<Mat6d> jacobian(const Vec6d& x, const ModelParams& p,
                              double chi = 0.0, double h = 1e-7);

// Eigenvalues sorted by descending modulus.
std::vector<std::complex<double>> eigenvalues(const Mat6d& J);

double spectral_radius(const Mat6d& J);

// The fixed-point line makes the fund-weight direction exactly neutral
// (eigenvalue 1), so the full spectral radius is 1 throughout the stable
// region. Stability is decided by the spectrum transverse to the line: the
// 5x5 minor with the fund-weight row and column removed.
double transverse_spectral_radius(const Mat6d& J);

struct CriticalAlpha {
  double alpha_c = 0.0;
  double lambda_c = 0.0;   // critical leverage, invariant across b
  double r_c = 0.0;        // critical relative size
  bool found = false;
};

// Smallest alpha at which the transverse spectral radius at the fixed point
// reaches 1. Geometric scan over [1e-4, 1e4] at ratio 1.25, then bisection
// to relative width 1e-4.
CriticalAlpha critical_alpha(ModelParams p);

enum class Regime { Stable, Cycles, GloballyUnstable };

const char* to_string(Regime r);

// Diverging trajectories are GloballyUnstable; a transverse spectral radius
// at or above 1 means Cycles; below 1 the regime is Stable only if the
// default-entry trajectory actually settles on the fixed point, since a
// large-amplitude cycle can coexist with the locally stable point.
Regime classify_regime(const ModelParams& p, int n_steps = 5000,
                       double tol = 1e-6);

struct LyapunovResult {
  double exponent = 0.0;  // per year
  long steps = 0;
  bool diverged = false;
};

class GarchProcess;

// Leading Lyapunov exponent by tangent-vector iteration: push a unit vector
// through the step Jacobian, renormalizing every step, and average the log
// growth over elapsed time. The same shock drives the state and the
// Jacobian at each step. The first burn_in steps evolve state and tangent
// but are excluded from the average; without this the non-normal transient
// of the tangent vector biases the estimate for any finite window.
LyapunovResult lyapunov_leading(const Vec6d& x0, const ModelParams& p,
                                GarchProcess& shocks, int n_steps,
                                int burn_in = 0);

LyapunovResult lyapunov_leading(const Vec6d& x0, const ModelParams& p,
                                int n_steps, int burn_in = 0);

}  // namespace basel
