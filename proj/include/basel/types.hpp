#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace basel {

template <class Scalar>
using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <class Scalar>
using Mat6 = Eigen::Matrix<Scalar, 6, 6>;

using Vec6d = Vec6<double>;
using Mat6d = Mat6<double>;

// State vector layout. p_lag carries the previous price so the squared
// log-return in the variance update is a function of the state alone.
enum StateIndex : int {
  kSigmaSq = 0,  // perceived variance of the risky-asset return
  kWF = 1,       // fund's risky portfolio weight
  kPrice = 2,    // current price
  kN = 3,        // bank's ownership fraction of the risky asset
  kLB = 4,       // bank liabilities
  kPLag = 5,     // previous price
};

enum class StepTag : std::uint8_t { Live, Diverged };

enum class DivergeReason : std::uint8_t {
  None,
  ClearingDenominator,  // market-clearing denominator <= 1e-12
  NonPositivePrice,
  NonFinite,
};

const char* to_string(DivergeReason r);

}  // namespace basel
