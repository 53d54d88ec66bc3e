#include "syncarena/basin.hpp"

#include "syncarena/parallel.hpp"

namespace syncarena {

double PhaseGrid::delta(int i) const {
  if (n_delta == 1) return delta_min;
  return delta_min + (delta_max - delta_min) * i / (n_delta - 1);
}

double PhaseGrid::delta_dot(int k) const {
  if (n_delta_dot == 1) return delta_dot_min;
  return delta_dot_min + (delta_dot_max - delta_dot_min) * k / (n_delta_dot - 1);
}

SyncVerdict simulate_verdict(const BasinProblem& problem, const SwingState& init) {
  PlantParams final_plant = problem.plant;
  double t_watch = 0.0;
  for (const TimedEvent& e : problem.events) {
    apply_sets(final_plant, e.sets);
    t_watch = e.t;
  }
  const Equilibria eq = ControllerDynamics(problem.variant, final_plant).equilibria();
  SyncMonitor monitor(eq.sep, eq.uep, problem.criteria);
  try {
    Simulator sim(problem.variant, problem.plant, init, problem.events, problem.step);
    do {
      if (sim.time() >= t_watch - 1e-12) {
        const SwingState s = sim.swing_state();
        monitor.feed(sim.time(), s(0), s(1));
        if (monitor.decided()) break;
      }
    } while (sim.step());
  } catch (const NonFiniteStateError& e) {
    return {SyncKind::PoleSlip, e.time()};
  }
  return monitor.verdict();
}

std::vector<SyncKind> classify_states(const BasinProblem& problem,
                                      const std::vector<SwingState>& states, int jobs) {
  std::vector<SyncKind> out(states.size(), SyncKind::Undetermined);
  parallel_for(states.size(), jobs,
               [&](std::size_t i) { out[i] = simulate_verdict(problem, states[i]).kind; });
  return out;
}

BasinMap basin_oracle(const BasinProblem& problem, const PhaseGrid& grid, int jobs) {
  if (grid.n_delta < 1 || grid.n_delta_dot < 1 || !(grid.delta_max >= grid.delta_min) ||
      !(grid.delta_dot_max >= grid.delta_dot_min)) {
    throw Error(ErrorCode::InvalidArgument, "degenerate phase grid");
  }
  std::vector<SwingState> states;
  states.reserve(static_cast<std::size_t>(grid.n_delta) * grid.n_delta_dot);
  for (int k = 0; k < grid.n_delta_dot; ++k) {
    for (int i = 0; i < grid.n_delta; ++i) states.emplace_back(grid.delta(i), grid.delta_dot(k));
  }
  return {grid, classify_states(problem, states, jobs)};
}

}  // namespace syncarena
