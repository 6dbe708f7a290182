#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "basel/garch.hpp"
#include "basel/random.hpp"
#include "basel/trajectory.hpp"

using namespace basel;

TEST_CASE("normal stream moments over a million draws") {
  NormalStream rng(12345);
  const long n = 1'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    const double z = rng();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / double(n);
  const double var = sum_sq / double(n) - mean * mean;
  CHECK(std::abs(mean) < 4e-3);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("normal stream is reproducible by seed") {
  NormalStream a(99), b(99), c(100);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = a(), vb = b(), vc = c();
    all_equal = all_equal && va == vb;
    any_diff = any_diff || va != vc;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("garch sample variance matches the stationary value") {
  const GarchParams g;  // a0 1e-3, a1 0.016, b1 0.87
  const double stationary = g.a0 / (1.0 - g.a1 - g.b1);
  CHECK(stationary == doctest::Approx(8.772e-3).epsilon(1e-3));
  GarchProcess proc(g, 777);
  const long n = 1'000'000;
  double sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    const double chi = proc();
    sum_sq += chi * chi;
  }
  CHECK(sum_sq / double(n) == doctest::Approx(stationary).epsilon(0.02));
}

TEST_CASE("garch starts from the stationary variance") {
  const GarchParams g;
  GarchProcess proc(g, 1);
  CHECK(proc.variance() == doctest::Approx(g.stationary_variance()));
  GarchParams ns{1e-3, 0.5, 0.6};  // non-stationary
  CHECK_FALSE(ns.stationary());
  CHECK(ns.stationary_variance() == doctest::Approx(ns.a0));
}

TEST_CASE("deterministic limit yields zero shocks") {
  GarchProcess proc(GarchParams{0.0, 0.0, 0.0}, 424242);
  for (int i = 0; i < 100; ++i) CHECK(proc() == 0.0);
}

TEST_CASE("garch is reproducible by seed") {
  const GarchParams g;
  GarchProcess a(g, 5), b(g, 5);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("noisy trajectories are reproducible by seed") {
  const ModelParams p;
  const GarchParams g;
  const Vec6d x0 = default_initial_state(p, g.stationary_variance());
  GarchProcess s1(g, 31), s2(g, 31);
  const Trajectory a = simulate(x0, p, s1, 500);
  const Trajectory b = simulate(x0, p, s2, 500);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(a.rows[i].state[j] == b.rows[i].state[j]);
}

TEST_CASE("shock enters the fund weight scaled by the root time step") {
  const ModelParams p;
  Vec6d x = default_initial_state(p);
  const double chi = 0.02;
  const StepResult<double> shocked = step(x, p, chi);
  const StepResult<double> still = step(x, p, 0.0);
  const double dw = shocked.next[kWF] - still.next[kWF];
  CHECK(dw == doctest::Approx(x[kWF] / x[kPrice] * std::sqrt(p.tau) * chi)
                  .epsilon(1e-12));
}
