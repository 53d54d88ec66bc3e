#pragma once

#include <optional>
#include <vector>

#include "syncarena/dynamics.hpp"
#include "syncarena/errors.hpp"
#include "syncarena/plant.hpp"

namespace syncarena {

struct StepConfig {
  double dt = 1e-4;
  double t_end = 5.0;
  int record_every = 1;
};

/// Parameter overwrites applied at time t.
struct TimedEvent {
  double t = 0.0;
  std::vector<ParamSet> sets;

  friend bool operator==(const TimedEvent&, const TimedEvent&) = default;
};

struct Sample {
  double t = 0.0;
  double delta = 0.0;
  double delta_dot = 0.0;
  double v_pccq = 0.0;
  double j_eff = 0.0;
  double kp_eff = 0.0;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
};

/// Classical fourth-order Runge–Kutta step for an autonomous field.
/// Throws Error(NonFiniteState) if the result is not finite.
template <typename State, typename Rhs>
State rk4_step(Rhs&& f, const State& y, double dt) {
  const State k1 = f(y);
  const State k2 = f(State(y + 0.5 * dt * k1));
  const State k3 = f(State(y + 0.5 * dt * k2));
  const State k4 = f(State(y + dt * k3));
  State next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw Error(ErrorCode::NonFiniteState, "RK4 produced a non-finite state");
  return next;
}

/// Step-by-step driver behind simulate(). Steps lie on the uniform grid k·dt;
/// an event strictly inside a step splits it so parameters switch exactly at
/// the event time. Events at a grid time are applied before that time's sample.
class Simulator {
 public:
  Simulator(Variant variant, const PlantParams& plant, const SwingState& init,
            std::vector<TimedEvent> events, const StepConfig& cfg);

  /// Advances one grid step. Returns false once t_end is reached.
  bool step();

  [[nodiscard]] double time() const;
  [[nodiscard]] long step_index() const { return k_; }
  [[nodiscard]] long step_count() const { return n_steps_; }
  [[nodiscard]] SwingState swing_state() const { return dyn_.to_swing(y_); }
  [[nodiscard]] const Vec2d& raw_state() const { return y_; }
  [[nodiscard]] const ControllerDynamics& dynamics() const { return dyn_; }
  [[nodiscard]] Sample sample() const;

 private:
  void apply_due_events(double t);
  void advance(double h, double t_from);

  Variant variant_;
  PlantParams plant_;
  std::vector<TimedEvent> events_;
  StepConfig cfg_;
  ControllerDynamics dyn_;
  Vec2d y_;
  std::size_t next_event_ = 0;
  long k_ = 0;
  long n_steps_ = 0;
};

/// Integrates a controller variant through a timeline of parameter events and
/// records every record_every-th grid point, starting with t = 0.
/// Throws NonFiniteStateError with the divergence time.
Trajectory simulate(Variant variant, const PlantParams& plant, const SwingState& init,
                    const std::vector<TimedEvent>& events, const StepConfig& cfg);

struct DiscreteDeltaStep {
  double delta_inc = 0.0;
  double accel = 0.0;
};

/// Δδ(n+1) = Δδ(n) + (P0 − Pe)·Δt²/J, with a(n) = (P0 − Pe)/J.
DiscreteDeltaStep discrete_delta_step(double p_0, double p_e, double j, double dt,
                                      double prev_delta_inc);

enum class SyncKind { Stable, PoleSlip, Undetermined };

std::string_view to_string(SyncKind kind);

/// Stable carries the settle time measured from the start of the examined
/// span; PoleSlip carries the absolute slip time.
struct SyncVerdict {
  SyncKind kind = SyncKind::Undetermined;
  double time = 0.0;
};

struct SyncCriteria {
  double angle_band = 0.01;  // rad
  double rate_band = 0.01;   // rad/s
  double dwell = 0.2;        // s
};

/// Online loss-of-synchronism classifier fed one sample at a time.
///
/// PoleSlip: δ leaves (uep − 2π, uep) after having been inside it, moving
/// outward, or |δ − sep| exceeds 2π. Stable: |δ − sep| and |δ̇| stay inside the
/// bands from some time onwards for at least the dwell time. Without
/// equilibria only a 2π drift from the first sample is detected.
class SyncMonitor {
 public:
  SyncMonitor(std::optional<double> sep, std::optional<double> uep, SyncCriteria criteria = {});

  void feed(double t, double delta, double delta_dot);
  /// Decisive as soon as it slipped, or once the dwell is met (early stop).
  [[nodiscard]] bool decided() const;
  [[nodiscard]] SyncVerdict verdict() const;

 private:
  std::optional<double> sep_;
  std::optional<double> uep_;
  SyncCriteria criteria_;
  bool started_ = false;
  double t_start_ = 0.0;
  double delta_start_ = 0.0;
  double t_last_ = 0.0;
  bool was_inside_ = false;
  std::optional<double> slip_time_;
  std::optional<double> band_since_;
};

/// Classifies the samples of traj with t in [t_begin, t_end] (all by default).
SyncVerdict detect_loss_of_sync(const Trajectory& traj, std::optional<double> sep,
                                std::optional<double> uep, double t_begin = -1e300,
                                double t_end = 1e300, SyncCriteria criteria = {});

}  // namespace syncarena
