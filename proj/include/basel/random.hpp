#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace basel {

// Standard-normal stream with a fixed generation scheme (Box-Muller over
// mt19937_64), so sequences are reproducible across standard libraries;
// std::normal_distribution is not pinned down by the standard.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = ((gen_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = (gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace basel
