#pragma once

#include <cstddef>
#include <vector>

#include "basel/trajectory.hpp"

namespace basel {

// Per-step log return on bank equity, log(1 + lambda w_b dp/p). Entries are
// NaN where the bank is insolvent or the argument of the log is not
// positive; consumers skip NaN entries.
std::vector<double> equity_log_returns(const Trajectory& t);

// Mean of the largest floor(q T) losses among the valid entries of the
// return series, where T is the valid count. Losses are the negated
// returns; ties are resolved by original position so the result is
// independent of the sort implementation. NaN when floor(q T) < 1.
double realized_shortfall(const std::vector<double>& returns, double q);

struct CycleStats {
  double mean_period = 0.0;       // years; NaN with fewer than 3 peaks
  double peak_to_trough = 0.0;    // mean max/min ratio between peaks
  std::size_t n_peaks = 0;
};

// Peaks are strict local maxima with prominence at least 10% of the series
// range. The period is the mean spacing of successive peaks. Peak-to-trough
// is the mean over inter-peak segments of the segment max over min; with
// fewer than 2 peaks it falls back to the global max over min.
CycleStats cycle_stats(const std::vector<double>& series, double tau);

// Prominence of a strict local maximum: descend from the peak on each side
// until a higher value is found, take the minimum on each walk, and measure
// the drop to the higher of the two minima.
double peak_prominence(const std::vector<double>& v, std::size_t i);

struct PoincarePoint {
  double sigma_sq;
  double n;
};

// Upward crossings of the price through the given plane, linearly
// interpolated between the bracketing steps.
std::vector<PoincarePoint> poincare_section(const Trajectory& t,
                                            double price_plane);

}  // namespace basel
