#pragma once

#include <vector>

#include "syncarena/integrate.hpp"

namespace syncarena {

/// Rectangular grid of initial conditions, endpoints included.
struct PhaseGrid {
  double delta_min = -kPi;
  double delta_max = kPi;
  double delta_dot_min = -1.0;
  double delta_dot_max = 1.0;
  int n_delta = 51;
  int n_delta_dot = 51;

  [[nodiscard]] double delta(int i) const;
  [[nodiscard]] double delta_dot(int k) const;
};

/// Verdicts in row-major order: index = k·n_delta + i (k over δ̇, i over δ).
struct BasinMap {
  PhaseGrid grid;
  std::vector<SyncKind> verdicts;

  [[nodiscard]] SyncKind at(int i, int k) const {
    return verdicts[static_cast<std::size_t>(k) * grid.n_delta + i];
  }
};

/// What to simulate from each initial condition. The verdict is judged against
/// the equilibria of the plant after the last event, from that event onwards.
struct BasinProblem {
  Variant variant = Variant::VsgOriginal;
  PlantParams plant;
  std::vector<TimedEvent> events;
  StepConfig step;
  SyncCriteria criteria;
};

/// Simulates one initial condition, stopping as soon as the verdict is decided.
SyncVerdict simulate_verdict(const BasinProblem& problem, const SwingState& init);

/// Verdicts for a list of initial conditions, in input order.
std::vector<SyncKind> classify_states(const BasinProblem& problem,
                                      const std::vector<SwingState>& states, int jobs);

/// Brute-force verdict map. Throws InvalidArgument for a degenerate grid.
BasinMap basin_oracle(const BasinProblem& problem, const PhaseGrid& grid, int jobs);

}  // namespace syncarena
