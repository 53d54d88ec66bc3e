#include "syncarena/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace syncarena {
namespace {

// Relative slack for deciding that an event coincides with a grid time.
constexpr double kTimeSlack = 1e-9;

}  // namespace

Simulator::Simulator(Variant variant, const PlantParams& plant, const SwingState& init,
                     std::vector<TimedEvent> events, const StepConfig& cfg)
    : variant_(variant), plant_(plant), events_(std::move(events)), cfg_(cfg),
      dyn_(variant, plant) {
  if (!(cfg_.dt > 0.0) || !(cfg_.t_end >= cfg_.dt) || cfg_.record_every < 1) {
    throw Error(ErrorCode::InvalidArgument, "StepConfig needs dt > 0, t_end >= dt, record_every >= 1");
  }
  if (!init.allFinite()) throw Error(ErrorCode::InvalidArgument, "initial state is not finite");
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i].t < 0.0 || events_[i].t > cfg_.t_end) {
      throw Error(ErrorCode::InvalidArgument, "event time outside [0, t_end]");
    }
    if (i > 0 && events_[i].t < events_[i - 1].t) {
      throw Error(ErrorCode::InvalidArgument, "events must be sorted by time");
    }
  }
  n_steps_ = std::lround(cfg_.t_end / cfg_.dt);
  apply_due_events(0.0);
  y_ = dyn_.from_swing(init);
}

double Simulator::time() const { return static_cast<double>(k_) * cfg_.dt; }

void Simulator::apply_due_events(double t) {
  bool changed = false;
  while (next_event_ < events_.size() && events_[next_event_].t <= t + kTimeSlack * cfg_.dt) {
    apply_sets(plant_, events_[next_event_].sets);
    ++next_event_;
    changed = true;
  }
  if (changed) dyn_ = ControllerDynamics(variant_, plant_);
}

void Simulator::advance(double h, double t_from) {
  try {
    y_ = rk4_step([this](const Vec2d& y) { return dyn_.rhs(y); }, y_, h);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonFiniteState) throw NonFiniteStateError(t_from + h, e.what());
    throw;
  }
}

bool Simulator::step() {
  if (k_ >= n_steps_) return false;
  const double t0 = time();
  const double t1 = static_cast<double>(k_ + 1) * cfg_.dt;
  double t = t0;
  while (next_event_ < events_.size() && events_[next_event_].t < t1 - kTimeSlack * cfg_.dt) {
    const double te = events_[next_event_].t;
    if (te > t) {
      advance(te - t, t);
      t = te;
    }
    apply_due_events(te);
  }
  advance(t1 - t, t);
  ++k_;
  apply_due_events(time());
  return true;
}

Sample Simulator::sample() const {
  const SwingState s = dyn_.to_swing(y_);
  const Observables o = dyn_.observe(y_);
  return {time(), s(0), s(1), o.v_pccq, o.j_eff, o.kp_eff, o.energy};
}

Trajectory simulate(Variant variant, const PlantParams& plant, const SwingState& init,
                    const std::vector<TimedEvent>& events, const StepConfig& cfg) {
  Simulator sim(variant, plant, init, events, cfg);
  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(sim.step_count() / cfg.record_every + 1));
  traj.samples.push_back(sim.sample());
  while (sim.step()) {
    if (sim.step_index() % cfg.record_every == 0) traj.samples.push_back(sim.sample());
  }
  return traj;
}

DiscreteDeltaStep discrete_delta_step(double p_0, double p_e, double j, double dt,
                                      double prev_delta_inc) {
  const double accel = (p_0 - p_e) / j;
  return {prev_delta_inc + accel * dt * dt, accel};
}

std::string_view to_string(SyncKind kind) {
  switch (kind) {
    case SyncKind::Stable: return "Stable";
    case SyncKind::PoleSlip: return "PoleSlip";
    case SyncKind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

SyncMonitor::SyncMonitor(std::optional<double> sep, std::optional<double> uep, SyncCriteria criteria)
    : sep_(sep), uep_(uep), criteria_(criteria) {}

void SyncMonitor::feed(double t, double delta, double delta_dot) {
  if (slip_time_) return;
  if (!started_) {
    started_ = true;
    t_start_ = t;
    delta_start_ = delta;
  }
  t_last_ = t;
  if (!sep_ || !uep_) {
    if (std::abs(delta - delta_start_) > 2.0 * kPi) slip_time_ = t;
    return;
  }
  const double lo = *uep_ - 2.0 * kPi;
  const double hi = *uep_;
  const bool inside = delta > lo && delta < hi;
  const bool escaping = (delta >= hi && delta_dot > 0.0) || (delta <= lo && delta_dot < 0.0);
  if ((was_inside_ && !inside && escaping) || std::abs(delta - *sep_) > 2.0 * kPi) {
    slip_time_ = t;
    return;
  }
  was_inside_ = was_inside_ || inside;
  if (std::abs(delta - *sep_) < criteria_.angle_band && std::abs(delta_dot) < criteria_.rate_band) {
    if (!band_since_) band_since_ = t;
  } else {
    band_since_.reset();
  }
}

bool SyncMonitor::decided() const {
  return slip_time_.has_value() ||
         (band_since_ && t_last_ - *band_since_ >= criteria_.dwell - 1e-9);
}

SyncVerdict SyncMonitor::verdict() const {
  if (slip_time_) return {SyncKind::PoleSlip, *slip_time_};
  if (band_since_ && t_last_ - *band_since_ >= criteria_.dwell - 1e-9) {
    return {SyncKind::Stable, *band_since_ - t_start_};
  }
  return {SyncKind::Undetermined, t_last_};
}

SyncVerdict detect_loss_of_sync(const Trajectory& traj, std::optional<double> sep,
                                std::optional<double> uep, double t_begin, double t_end,
                                SyncCriteria criteria) {
  SyncMonitor monitor(sep, uep, criteria);
  for (const Sample& s : traj.samples) {
    if (s.t < t_begin || s.t > t_end) continue;
    monitor.feed(s.t, s.delta, s.delta_dot);
  }
  return monitor.verdict();
}

}  // namespace syncarena
