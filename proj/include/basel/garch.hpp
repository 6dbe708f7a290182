#pragma once

#include <cmath>
#include <cstdint>

#include "basel/params.hpp"
#include "basel/random.hpp"

namespace basel {

// GARCH(1,1) shock generator: s2(t+1) = a0 + a1 chi(t)^2 + b1 s2(t),
// chi(t+1) = sqrt(s2(t+1)) z. Starts from the stationary variance with a
// zero previous shock. In the deterministic limit every draw is zero.
class GarchProcess {
 public:
  GarchProcess(const GarchParams& g, std::uint64_t seed)
      : g_(g), rng_(seed), s2_(g.stationary_variance()) {}

  double operator()() {
    if (g_.deterministic()) return 0.0;
    s2_ = g_.a0 + g_.a1 * chi_ * chi_ + g_.b1 * s2_;
    chi_ = std::sqrt(s2_) * rng_();
    return chi_;
  }

  double variance() const { return s2_; }

 private:
  GarchParams g_;
  NormalStream rng_;
  double s2_;
  double chi_ = 0.0;
};

}  // namespace basel
