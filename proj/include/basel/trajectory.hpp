#pragma once

#include <cstdint>
#include <vector>

#include "basel/garch.hpp"
#include "basel/model.hpp"

namespace basel {

// One recorded step: the pre-step state and the balance-sheet quantities at
// that state, plus the flags raised while stepping away from it.
struct TrajectoryRow {
  Vec6d state;
  Derived<double> derived;
  bool clamped = false;
  bool n_excursion = false;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  StepTag final_tag = StepTag::Live;
  DivergeReason reason = DivergeReason::None;
  Vec6d final_state = Vec6d::Zero();  // state after the last live step
  Derived<double> final_derived{};    // balance sheet at final_state
  long clamp_count = 0;
  long n_excursions = 0;
  long insolvent_steps = 0;
  double tau = 0.0;

  bool diverged() const { return final_tag == StepTag::Diverged; }
  double time_at(std::size_t i) const { return double(i) * tau; }
};

// Runs n_steps steps from x0, drawing one shock per step. Stops early on
// divergence; the row that triggered it is recorded with its flags.
Trajectory simulate(const Vec6d& x0, const ModelParams& p, GarchProcess& shocks,
                    int n_steps);

// Deterministic limit.
Trajectory simulate(const Vec6d& x0, const ModelParams& p, int n_steps);

}  // namespace basel
