#pragma once

#include "basel/model.hpp"

namespace basel {

// The deterministic map has a line of fixed points: price at fundamental,
// variance at zero, equity on target, bank exactly at its leverage target,
// with the fund weight a free coordinate. find_fixed_point reports the point
// with the fund weight at its equilibrium value w_f0.
struct FixedPoint {
  Vec6d x;
  double lambda_star;   // leverage at the fixed point
  double r_star;        // bank size relative to the fund
  bool feasible;        // bank ownership share inside (0, 1)
};

FixedPoint find_fixed_point(const ModelParams& p);

}  // namespace basel
