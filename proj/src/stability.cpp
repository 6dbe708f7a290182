#include "basel/stability.hpp"

#include <algorithm>
#include <cmath>

#include "basel/garch.hpp"
#include "basel/trajectory.hpp"

namespace basel {

FixedPoint find_fixed_point(const ModelParams& p) {
  FixedPoint fp;
  const double lam = target_leverage(0.0, p);
  const double n = p.w_b * lam * p.e_bar / p.mu;
  fp.x[kSigmaSq] = 0.0;
  fp.x[kWF] = p.w_f0;
  fp.x[kPrice] = p.mu;
  fp.x[kN] = n;
  fp.x[kLB] = (lam - 1.0) * p.e_bar;
  fp.x[kPLag] = p.mu;
  fp.lambda_star = lam;
  fp.r_star = lam * p.e_bar * p.w_f0 / ((1.0 - n) * p.mu);
  fp.feasible = n > 0.0 && n < 1.0;
  return fp;
}

std::optional<Mat6d> jacobian(const Vec6d& x, const ModelParams& p, double chi,
                              double h) {
  Mat6d J;
  for (int j = 0; j < 6; ++j) {
    const double hj = std::max(h, h * std::abs(x[j]));
    Vec6d xp = x, xm = x;
    xp[j] += hj;
    xm[j] -= hj;
    const StepResult<double> fp = step(xp, p, chi);
    const StepResult<double> fm = step(xm, p, chi);
    if (fp.tag == StepTag::Diverged || fm.tag == StepTag::Diverged)
      return std::nullopt;
    J.col(j) = (fp.next - fm.next) / (2.0 * hj);
  }
  return J;
}

namespace {

// Balance by diagonal powers-of-two similarity until row and column norms
// agree, as LAPACK does before QR. The Jacobian's entries span many orders
// of magnitude (the leverage target's variance sensitivity is ~1e7 at the
// default offset), and without balancing the computed moduli wobble by
// ~1e-4 — enough to corrupt a bisection on the spectral radius.
template <int N>
void balance(Eigen::Matrix<double, N, N>& A) {
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < N; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      double g = r / 2.0;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c >= g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        A.row(i) /= f;
        A.col(i) *= f;
        done = false;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Mat6d& J) {
  Mat6d B = J;
  balance<6>(B);
  Eigen::EigenSolver<Mat6d> solver(B, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> ev(6);
  for (int i = 0; i < 6; ++i) ev[i] = solver.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return std::abs(a) > std::abs(b);
            });
  return ev;
}

double spectral_radius(const Mat6d& J) {
  return std::abs(eigenvalues(J)[0]);
}

double transverse_spectral_radius(const Mat6d& J) {
  Eigen::Matrix<double, 5, 5> M;
  for (int i = 0, mi = 0; i < 6; ++i) {
    if (i == kWF) continue;
    for (int j = 0, mj = 0; j < 6; ++j) {
      if (j == kWF) continue;
      M(mi, mj) = J(i, j);
      ++mj;
    }
    ++mi;
  }
  balance<5>(M);
  Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> solver(M, false);
  double r = 0.0;
  for (int i = 0; i < 5; ++i) r = std::max(r, std::abs(solver.eigenvalues()[i]));
  return r;
}

namespace {

// Transverse spectral radius at the fixed point for a given alpha; NaN if
// the Jacobian probe fails.
double radius_at_alpha(ModelParams p, double alpha) {
  p.alpha = alpha;
  const FixedPoint fp = find_fixed_point(p);
  const std::optional<Mat6d> J = jacobian(fp.x, p);
  if (!J) return std::numeric_limits<double>::quiet_NaN();
  return transverse_spectral_radius(*J);
}

}  // namespace

CriticalAlpha critical_alpha(ModelParams p) {
  CriticalAlpha out;
  const double ratio = 1.25;
  double lo = 0.0, hi = 0.0;
  double prev_alpha = 0.0, prev_r = std::numeric_limits<double>::quiet_NaN();
  for (double a = 1e-4; a <= 1e4 * (1.0 + 1e-12); a *= ratio) {
    const double r = radius_at_alpha(p, a);
    if (prev_r < 1.0 && r >= 1.0) {
      lo = prev_alpha;
      hi = a;
      break;
    }
    prev_alpha = a;
    prev_r = r;
  }
  if (hi == 0.0) return out;
  while ((hi - lo) / (0.5 * (hi + lo)) > 1e-4) {
    const double mid = std::sqrt(lo * hi);
    if (radius_at_alpha(p, mid) >= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  out.alpha_c = 0.5 * (lo + hi);
  p.alpha = out.alpha_c;
  const FixedPoint fp = find_fixed_point(p);
  out.lambda_c = fp.lambda_star;
  out.r_c = fp.r_star;
  out.found = true;
  return out;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Stable: return "stable";
    case Regime::Cycles: return "cycles";
    case Regime::GloballyUnstable: return "globally_unstable";
  }
  return "unknown";
}

Regime classify_regime(const ModelParams& p, int n_steps, double tol) {
  const Trajectory t = simulate(default_initial_state(p), p, n_steps);
  if (t.diverged()) return Regime::GloballyUnstable;
  const FixedPoint fp = find_fixed_point(p);
  const std::optional<Mat6d> J = jacobian(fp.x, p);
  if (!J) return Regime::GloballyUnstable;
  if (transverse_spectral_radius(*J) >= 1.0) return Regime::Cycles;
  const double dp = std::abs(t.final_state[kPrice] - p.mu) / p.mu;
  return dp < tol ? Regime::Stable : Regime::Cycles;
}

LyapunovResult lyapunov_leading(const Vec6d& x0, const ModelParams& p,
                                GarchProcess& shocks, int n_steps,
                                int burn_in) {
  LyapunovResult out;
  Vec6d x = x0;
  Vec6d v = Vec6d::Ones() / std::sqrt(6.0);
  double log_sum = 0.0;
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
      ++out.steps;
    }
    x = r.next;
  }
  out.exponent = out.steps > 0 ? log_sum / (double(out.steps) * p.tau) : 0.0;
  return out;
}

LyapunovResult lyapunov_leading(const Vec6d& x0, const ModelParams& p,
                                int n_steps, int burn_in) {
  GarchProcess none(GarchParams{0.0, 0.0, 0.0}, 0);
  return lyapunov_leading(x0, p, none, n_steps, burn_in);
}

}  // namespace basel
