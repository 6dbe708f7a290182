#include "basel/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace basel {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> equity_log_returns(const Trajectory& t) {
  std::vector<double> out;
  if (t.rows.empty()) return out;
  const std::size_t transitions =
      t.diverged() ? t.rows.size() - 1 : t.rows.size();
  out.reserve(transitions);
  for (std::size_t i = 0; i < transitions; ++i) {
    const TrajectoryRow& row = t.rows[i];
    const double p_next =
        i + 1 < t.rows.size() ? t.rows[i + 1].state[kPrice] : t.final_state[kPrice];
    if (row.derived.insolvent) {
      out.push_back(kNaN);
      continue;
    }
    // (E + n dp)/E; equals 1 + lambda w_b dp/p since n p = w_b A_B.
    const double growth =
        (row.derived.equity + row.state[kN] * (p_next - row.state[kPrice])) /
        row.derived.equity;
    out.push_back(growth > 0.0 ? std::log(growth) : kNaN);
  }
  return out;
}

double realized_shortfall(const std::vector<double>& returns, double q) {
  std::vector<double> losses;
  losses.reserve(returns.size());
  for (const double r : returns)
    if (!std::isnan(r)) losses.push_back(-r);
  const std::size_t t_len = losses.size();
  const auto k = static_cast<std::size_t>(std::floor(q * double(t_len)));
  if (k < 1 || !(q > 0.0) || !(q < 1.0)) return kNaN;
  std::vector<std::size_t> idx(t_len);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return losses[a] > losses[b];
  });
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += losses[idx[i]];
  return sum / double(k);
}

double peak_prominence(const std::vector<double>& v, std::size_t i) {
  double left_base = v[i];
  for (std::size_t j = i; j-- > 0;) {
    if (v[j] > v[i]) break;
    left_base = std::min(left_base, v[j]);
  }
  double right_base = v[i];
  for (std::size_t j = i + 1; j < v.size(); ++j) {
    if (v[j] > v[i]) break;
    right_base = std::min(right_base, v[j]);
  }
  return v[i] - std::max(left_base, right_base);
}

CycleStats cycle_stats(const std::vector<double>& series, double tau) {
  CycleStats out;
  out.mean_period = kNaN;
  out.peak_to_trough = kNaN;
  if (series.size() < 3) return out;
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double threshold = 0.1 * (*hi_it - *lo_it);
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    if (series[i] > series[i - 1] && series[i] > series[i + 1] &&
        peak_prominence(series, i) >= threshold)
      peaks.push_back(i);
  }
  out.n_peaks = peaks.size();
  if (peaks.size() >= 3) {
    double spacing = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
      spacing += double(peaks[i] - peaks[i - 1]);
    out.mean_period = spacing / double(peaks.size() - 1) * tau;
  }
  if (peaks.size() >= 2) {
    double ratio_sum = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
      const auto seg_begin = series.begin() + long(peaks[i - 1]);
      const auto seg_end = series.begin() + long(peaks[i]) + 1;
      const auto [s_lo, s_hi] = std::minmax_element(seg_begin, seg_end);
      ratio_sum += *s_hi / *s_lo;
    }
    out.peak_to_trough = ratio_sum / double(peaks.size() - 1);
  } else {
    out.peak_to_trough = *hi_it / *lo_it;
  }
  return out;
}

std::vector<PoincarePoint> poincare_section(const Trajectory& t,
                                            double price_plane) {
  std::vector<PoincarePoint> out;
  if (t.rows.empty()) return out;
  auto state_at = [&](std::size_t i) -> const Vec6d& {
    return i < t.rows.size() ? t.rows[i].state : t.final_state;
  };
  const std::size_t last = t.diverged() ? t.rows.size() - 1 : t.rows.size();
  for (std::size_t i = 0; i + 1 <= last; ++i) {
    const Vec6d& a = state_at(i);
    const Vec6d& b = state_at(i + 1);
    if (a[kPrice] < price_plane && b[kPrice] >= price_plane) {
      const double f = (price_plane - a[kPrice]) / (b[kPrice] - a[kPrice]);
      out.push_back({a[kSigmaSq] + f * (b[kSigmaSq] - a[kSigmaSq]),
                     a[kN] + f * (b[kN] - a[kN])});
    }
  }
  return out;
}

}  // namespace basel
