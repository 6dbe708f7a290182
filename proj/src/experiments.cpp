#include "basel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <thread>

#include "basel/garch.hpp"
#include "basel/risk.hpp"
#include "basel/trajectory.hpp"

namespace basel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Evaluation {
  double mean_target_leverage = 0.0;
  double mean_r = 0.0;
  bool valid = false;
};

// Seed-averaged post-burn-in time means of the target leverage and the
// relative size. Invalid as soon as any seed's trajectory diverges.
Evaluation evaluate(const ModelParams& p, const GarchParams& garch,
                    const TargetSpec& spec) {
  Evaluation ev;
  double lev = 0.0, r = 0.0;
  for (const std::uint64_t seed : spec.seeds) {
    GarchProcess shocks(garch, seed);
    const Vec6d x0 = default_initial_state(p, garch.stationary_variance());
    const Trajectory t = simulate(x0, p, shocks, spec.t_len);
    if (t.diverged()) return ev;
    double lev_sum = 0.0, r_sum = 0.0;
    long count = 0;
    for (std::size_t i = spec.burn_in < 0 ? 0 : std::size_t(spec.burn_in);
         i < t.rows.size(); ++i) {
      lev_sum += t.rows[i].derived.target_leverage;
      r_sum += t.rows[i].derived.relative_size;
      ++count;
    }
    if (count == 0) return ev;
    lev += lev_sum / double(count);
    r += r_sum / double(count);
  }
  ev.mean_target_leverage = lev / double(spec.seeds.size());
  ev.mean_r = r / double(spec.seeds.size());
  ev.valid = ev.mean_target_leverage > 0.0 && ev.mean_r > 0.0;
  return ev;
}

}  // namespace

MatchResult match_targets(const TargetSpec& spec, ModelParams params,
                          const GarchParams& garch) {
  MatchResult out;
  out.status = "diverged";
  if (spec.seeds.empty()) {
    out.status = "no_seeds";
    return out;
  }
  params.b = spec.b;

  // Fixed-point relations give the starting guess: e_bar from the relative
  // size identity, alpha from the leverage target at zero variance.
  const double e0 =
      spec.r_hat * params.mu /
      (spec.lambda_hat * (params.w_f0 + spec.r_hat * params.w_b));
  const double a0 = spec.lambda_hat * std::pow(params.sigma0_sq, -params.b);

  Eigen::Vector2d u(std::log(a0), std::log(e0));
  auto residual = [&](const Eigen::Vector2d& uu,
                      Evaluation& ev) -> std::optional<Eigen::Vector2d> {
    if (std::abs(uu[0]) > 25.0 || std::abs(uu[1]) > 30.0) return std::nullopt;
    params.alpha = std::exp(uu[0]);
    params.e_bar = std::exp(uu[1]);
    ev = evaluate(params, garch, spec);
    if (!ev.valid) return std::nullopt;
    return Eigen::Vector2d(std::log(ev.mean_target_leverage / spec.lambda_hat),
                           std::log(ev.mean_r / spec.r_hat));
  };

  Evaluation ev;
  std::optional<Eigen::Vector2d> f = residual(u, ev);
  if (!f) return out;

  // Forward-difference initialization of the Broyden matrix.
  Eigen::Matrix2d B;
  const double du = 0.1;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d up = u;
    up[j] += du;
    Evaluation evp;
    const std::optional<Eigen::Vector2d> fp = residual(up, evp);
    if (!fp) return out;
    B.col(j) = (*fp - *f) / du;
  }

  const double damping = 0.5;
  for (out.iterations = 1; out.iterations <= 100; ++out.iterations) {
    if (std::abs(std::exp((*f)[0]) - 1.0) <= 0.01 &&
        std::abs(std::exp((*f)[1]) - 1.0) <= 0.01) {
      out.converged = true;
      out.status = "ok";
      out.alpha = std::exp(u[0]);
      out.e_bar = std::exp(u[1]);
      out.achieved_lambda = ev.mean_target_leverage;
      out.achieved_r = ev.mean_r;
      return out;
    }
    const Eigen::Vector2d full = -B.fullPivLu().solve(*f);
    if (!full.allFinite()) {
      out.status = "singular_update";
      return out;
    }
    Eigen::Vector2d s = damping * full;
    Evaluation ev_new;
    std::optional<Eigen::Vector2d> f_new;
    int backtracks = 0;
    for (; backtracks < 5; ++backtracks) {
      f_new = residual(u + s, ev_new);
      if (f_new) break;
      s *= 0.5;
    }
    if (!f_new) {
      out.status = "diverged";
      return out;
    }
    const Eigen::Vector2d df = *f_new - *f;
    B += (df - B * s) * s.transpose() / s.squaredNorm();
    u += s;
    f = f_new;
    ev = ev_new;
  }
  out.status = "max_iterations";
  return out;
}

namespace {

// Seed-averaged realized shortfall of post-burn-in equity returns at fixed
// parameters.
double sweep_shortfall(const ModelParams& p, const GarchParams& garch,
                       const TargetSpec& spec, double q) {
  double sum = 0.0;
  long count = 0;
  for (const std::uint64_t seed : spec.seeds) {
    GarchProcess shocks(garch, seed);
    const Vec6d x0 = default_initial_state(p, garch.stationary_variance());
    const Trajectory t = simulate(x0, p, shocks, spec.t_len);
    if (t.diverged()) return kNaN;
    std::vector<double> rets = equity_log_returns(t);
    if (std::size_t(spec.burn_in) < rets.size())
      rets.erase(rets.begin(), rets.begin() + spec.burn_in);
    const double rs = realized_shortfall(rets, q);
    if (std::isnan(rs)) return kNaN;
    sum += rs;
    ++count;
  }
  return count > 0 ? sum / double(count) : kNaN;
}

void parallel_cells(int n_cells, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int i = 0; i < n_cells; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

}  // namespace

SweepResult policy_sweep(const std::vector<double>& b_grid, TargetSpec spec,
                         const GarchParams& garch, ModelParams params,
                         double q, int threads) {
  SweepResult out;
  out.rows.resize(b_grid.size());
  const std::vector<std::uint64_t> base_seeds = spec.seeds;
  parallel_cells(int(b_grid.size()), threads, [&](int i) {
    TargetSpec cell = spec;
    cell.b = b_grid[std::size_t(i)];
    // Distinct seed block per cell so cells are independent of evaluation
    // order and thread count.
    cell.seeds.clear();
    for (const std::uint64_t s : base_seeds)
      cell.seeds.push_back(s + std::uint64_t(i) * 1000003u);
    SweepRow& row = out.rows[std::size_t(i)];
    row.b = cell.b;
    const MatchResult m = match_targets(cell, params, garch);
    row.status = m.status;
    row.rs_q = kNaN;
    row.rs_normalized = kNaN;
    if (!m.converged) return;
    row.alpha = m.alpha;
    row.e_bar = m.e_bar;
    row.mean_leverage = m.achieved_lambda;
    row.mean_r = m.achieved_r;
    ModelParams cal = params;
    cal.b = cell.b;
    cal.alpha = m.alpha;
    cal.e_bar = m.e_bar;
    row.rs_q = sweep_shortfall(cal, garch, cell, q);
    if (std::isnan(row.rs_q)) row.status = "shortfall_failed";
  });

  const auto ref = std::find_if(out.rows.begin(), out.rows.end(),
                                [](const SweepRow& r) {
                                  return std::abs(r.b + 0.5) < 1e-12 &&
                                         !std::isnan(r.rs_q);
                                });
  if (ref != out.rows.end()) {
    for (SweepRow& r : out.rows)
      r.rs_normalized = std::isnan(r.rs_q) ? kNaN : r.rs_q / ref->rs_q;
    std::vector<double> xs, ys;
    for (const SweepRow& r : out.rows) {
      xs.push_back(r.b);
      ys.push_back(r.rs_normalized);
    }
    out.b_star = refine_argmin(xs, ys);
    out.b_star_valid = !std::isnan(out.b_star);
  }
  return out;
}

BifurcationResult bifurcation_scan(const std::vector<double>& b_grid,
                                   const std::vector<double>& alpha_grid,
                                   ModelParams params, int threads) {
  BifurcationResult out;
  out.b_grid = b_grid;
  out.cells.resize(b_grid.size() * alpha_grid.size());
  out.boundary.resize(b_grid.size());
  parallel_cells(int(b_grid.size()), threads, [&](int i) {
    ModelParams p = params;
    p.b = b_grid[std::size_t(i)];
    out.boundary[std::size_t(i)] = critical_alpha(p);
    for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
      p.alpha = alpha_grid[j];
      BifurcationCell& cell = out.cells[std::size_t(i) * alpha_grid.size() + j];
      cell.b = p.b;
      cell.alpha = p.alpha;
      cell.lambda_star = find_fixed_point(p).lambda_star;
      cell.regime = classify_regime(p);
    }
  });
  return out;
}

std::vector<ThetaSweepRow> theta_sweep(const std::vector<double>& theta_tau_grid,
                                       ModelParams params) {
  std::vector<ThetaSweepRow> rows;
  for (const double tt : theta_tau_grid) {
    ModelParams p = params;
    p.theta = tt / p.tau;
    p.theta_minus.reset();  // tracks theta across the sweep
    const CriticalAlpha c = critical_alpha(p);
    rows.push_back({tt, c.lambda_c, c.r_c, c.found});
  }
  return rows;
}

double refine_argmin(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < ys.size(); ++i)
    if (!std::isnan(ys[i])) valid.push_back(i);
  if (valid.empty()) return kNaN;
  std::sort(valid.begin(), valid.end(),
            [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });
  const std::size_t grid_min = valid[0];
  if (valid.size() < 3) return xs[grid_min];
  std::size_t three[3] = {valid[0], valid[1], valid[2]};
  std::sort(three, three + 3);
  const bool consecutive =
      three[1] == three[0] + 1 && three[2] == three[1] + 1;
  if (!consecutive || three[1] != grid_min) return xs[grid_min];
  const double x0 = xs[three[0]], x1 = xs[three[1]], x2 = xs[three[2]];
  const double y0 = ys[three[0]], y1 = ys[three[1]], y2 = ys[three[2]];
  const double num =
      (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0) return xs[grid_min];
  const double vertex = x1 - 0.5 * num / den;
  if (vertex < x0 || vertex > x2 || !std::isfinite(vertex))
    return xs[grid_min];
  return vertex;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  if (n <= 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < n; ++i)
    v.push_back(lo + (hi - lo) * double(i) / double(n - 1));
  return v;
}

std::vector<double> geomspace(double lo, double hi, int n) {
  std::vector<double> v;
  if (n <= 1) {
    v.push_back(lo);
    return v;
  }
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i)
    v.push_back(lo * std::exp(ratio * double(i) / double(n - 1)));
  return v;
}

}  // namespace basel
