#include "syncarena/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "syncarena/errors.hpp"
#include "syncarena/model.hpp"
#include "syncarena/parallel.hpp"

namespace syncarena {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parallel(double a, double b) { return a * b / (a + b); }

PlantParams plant_at(const ScenarioSpec& spec, double t) {
  PlantParams p = spec.plant;
  for (const TimedEvent& e : spec.events) {
    if (e.t <= t + 1e-9 * spec.step.dt) apply_sets(p, e.sets);
  }
  return p;
}

bool is_fault_key(std::string_view key) { return key.rfind("fault.", 0) == 0; }

void set_fault_key(FaultSpec& fault, double v_g_normal, std::string_view key, double value) {
  if (key == "fault.v_g") {
    fault.v_g = value;
  } else if (key == "fault.depth") {
    fault.v_g = (1.0 - value) * v_g_normal;
  } else if (key == "fault.t_on") {
    fault.t_on = value;
  } else if (key == "fault.t_clear") {
    fault.t_clear = value;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown sweep key '" + std::string(key) + "'");
  }
}

double sweep_margin(const ScenarioSpec& spec, const std::optional<FaultSpec>& fault,
                    const ScenarioResult& result) {
  if (!fault) return kNaN;
  const PlantParams pre = plant_at(spec, fault->t_on - spec.step.dt);
  const PlantParams during = plant_at(spec, fault->t_on);
  const PlantParams post = plant_at(spec, fault->t_clear);
  const ControllerDynamics d_pre(spec.variant, pre);
  const ControllerDynamics d_fault(spec.variant, during);
  const ControllerDynamics d_post(spec.variant, post);
  if (!d_fault.swing() || !d_post.swing() || !d_pre.swing()) return kNaN;
  const auto at = [&](double t) {
    for (const Sample& s : result.trajectory.samples) {
      if (s.t >= t - 1e-9) return SwingState(s.delta, s.delta_dot);
    }
    const Sample& s = result.trajectory.samples.back();
    return SwingState(s.delta, s.delta_dot);
  };
  const SwingState at_fault = at(fault->t_on);
  if (is_grid_forming(spec.variant)) {
    const double d_clear = std::max(at(fault->t_clear)(0), at_fault(0));
    return eac_gfm(*d_fault.swing(), *d_post.swing(), at_fault(0), d_clear).margin;
  }
  return eac_gfl(*d_pre.swing(), *d_fault.swing(), at_fault).margin;
}

}  // namespace

std::string_view to_string(LineConfig lines) {
  switch (lines) {
    case LineConfig::BothLines: return "both_lines";
    case LineConfig::LineTrip: return "line_trip";
    case LineConfig::LineOnly: return "line_only";
  }
  return "both_lines";
}

std::string_view to_string(InitPolicy policy) {
  return policy == InitPolicy::StartAtSep ? "sep" : "explicit";
}

PlantParams Preset::plant() const {
  PlantParams p;
  p.base = base;
  p.grid = grid;
  p.current = current_normal;
  p.gfl = gfl;
  p.gfm = gfm;
  return p;
}

Preset preset_table2(LineConfig lines) {
  Preset p;
  p.name = "table2";
  p.lines = lines;
  p.grid.x_t = 0.2;
  p.grid.x_f = 0.15;
  p.grid.v_g = 1.0;
  p.grid.v_pcc = p.v_mref;
  p.grid.omega_0 = p.base.omega_0;
  switch (lines) {
    case LineConfig::BothLines:
      p.grid.x_g = p.grid.x_t + parallel(p.x_g1, p.x_g2);
      p.grid.r_g = parallel(p.r_g1, p.r_g2);
      break;
    case LineConfig::LineTrip:
      p.grid.x_g = p.grid.x_t + p.x_g1;
      p.grid.r_g = p.r_g1;
      break;
    case LineConfig::LineOnly:
      p.grid.x_g = p.x_g1;
      p.grid.r_g = p.r_g1;
      break;
  }
  p.current_normal = {1.0, 0.0, 1.0};
  p.current_fault = {0.0, -1.0, 1.0};

  p.gfl.k_p = 0.3;
  p.gfl.k_i = 4.0;
  p.gfl.k_vq = p.gfl.k_p / 0.5;
  p.gfl.gain_base = p.base.omega_0;

  p.gfm.p_0 = 0.8;
  p.gfm.j = 300.0;
  p.gfm.j_0 = 300.0;
  p.gfm.n = 5.0;
  p.gfm.d = 100.0;
  p.gfm.k_omega = 3900.0;
  p.gfm.power_base = p.base.s_n;
  return p;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"table2", "table2-gfl", "table2-gfm",
                                                 "table2-line-trip", "table2-line-only"};
  return names;
}

Preset find_preset(std::string_view name) {
  Preset p;
  if (name == "table2" || name == "table2-gfl") {
    p = preset_table2();
    p.variant = name == "table2" ? Variant::PllOriginal : Variant::PllEnhanced;
  } else if (name == "table2-gfm") {
    p = preset_table2();
    p.variant = Variant::VsgEnhanced;
  } else if (name == "table2-line-trip") {
    p = preset_table2(LineConfig::LineTrip);
  } else if (name == "table2-line-only") {
    p = preset_table2(LineConfig::LineOnly);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown preset '" + std::string(name) + "'");
  }
  p.name = std::string(name);
  return p;
}

std::vector<TimedEvent> fault_events(const PlantParams& normal, const FaultSpec& fault) {
  if (!(fault.t_clear >= fault.t_on)) {
    throw Error(ErrorCode::InvalidArgument, "fault clears before it starts");
  }
  TimedEvent on{fault.t_on, {{"grid.v_g", fault.v_g}, {"fault", 1.0}}};
  TimedEvent off{fault.t_clear, {{"grid.v_g", normal.grid.v_g}, {"fault", 0.0}}};
  if (fault.switch_currents) {
    on.sets.push_back({"gfl.i_d", fault.current.i_d});
    on.sets.push_back({"gfl.i_q", fault.current.i_q});
    off.sets.push_back({"gfl.i_d", normal.current.i_d});
    off.sets.push_back({"gfl.i_q", normal.current.i_q});
  }
  return {on, off};
}

SwingState initial_state(const ScenarioSpec& spec) {
  if (spec.init == InitPolicy::Explicit) return spec.init_state;
  const Equilibria eq = ControllerDynamics(spec.variant, plant_at(spec, 0.0)).equilibria();
  if (!eq.sep) throw Error(ErrorCode::NoEquilibrium, "no operating point to start from");
  return {*eq.sep, 0.0};
}

bool ScenarioResult::slipped() const {
  return std::any_of(windows.begin(), windows.end(),
                     [](const WindowVerdict& w) { return w.verdict.kind == SyncKind::PoleSlip; });
}

bool ScenarioResult::stable() const {
  return !windows.empty() && !slipped() && windows.back().verdict.kind == SyncKind::Stable;
}

std::vector<WindowVerdict> window_verdicts(const ScenarioSpec& spec, const Trajectory& traj) {
  const double t_end =
      static_cast<double>(std::lround(spec.step.t_end / spec.step.dt)) * spec.step.dt;
  std::vector<double> cuts = {0.0};
  for (const TimedEvent& e : spec.events) {
    if (e.t > cuts.back() && e.t < t_end) cuts.push_back(e.t);
  }
  cuts.push_back(t_end);

  std::vector<WindowVerdict> out;
  for (std::size_t w = 0; w + 1 < cuts.size(); ++w) {
    WindowVerdict v;
    v.t_begin = cuts[w];
    v.t_end = cuts[w + 1];
    const Equilibria eq = ControllerDynamics(spec.variant, plant_at(spec, v.t_begin)).equilibria();
    const auto first = std::find_if(traj.samples.begin(), traj.samples.end(),
                                    [&](const Sample& s) { return s.t >= v.t_begin - 1e-12; });
    if (eq.exist() && first != traj.samples.end()) {
      const double k = std::ceil((first->delta - *eq.uep) / (2.0 * kPi));
      v.sep = *eq.sep + 2.0 * kPi * k;
      v.uep = *eq.uep + 2.0 * kPi * k;
    }
    // The sample at an event time already carries the new parameters, so it
    // belongs to the next window only.
    const bool last = w + 2 == cuts.size();
    const double upto = last ? v.t_end : v.t_end - 1e-6 * spec.step.dt;
    v.verdict = detect_loss_of_sync(traj, v.sep, v.uep, v.t_begin, upto);
    out.push_back(v);
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  ScenarioResult r;
  r.initial = initial_state(spec);
  r.trajectory = simulate(spec.variant, spec.plant, r.initial, spec.events, spec.step);
  r.windows = window_verdicts(spec, r.trajectory);
  return r;
}

FaultSpec fig7_fault(const Preset& preset) {
  return {2.0, 3.0, preset.v_g_fault, true, preset.current_fault};
}

FaultSpec fig8_fault(const Preset& preset) {
  return {2.0, 2.4, preset.v_g_fault, false, preset.current_fault};
}

std::optional<FaultSpec> scenario_fault(const Preset& preset, Variant variant) {
  return is_grid_forming(variant) ? fig8_fault(preset) : fig7_fault(preset);
}

std::optional<FaultSpec> infer_fault(const ScenarioSpec& spec) {
  if (spec.events.size() != 2) return std::nullopt;
  const auto find = [](const TimedEvent& e, std::string_view key) -> std::optional<double> {
    for (const ParamSet& s : e.sets) {
      if (s.key == key) return s.value;
    }
    return std::nullopt;
  };
  const TimedEvent& on = spec.events[0];
  const TimedEvent& off = spec.events[1];
  const auto v_g = find(on, "grid.v_g");
  if (!v_g || !find(off, "grid.v_g")) return std::nullopt;
  FaultSpec f;
  f.t_on = on.t;
  f.t_clear = off.t;
  f.v_g = *v_g;
  const auto i_d = find(on, "gfl.i_d");
  const auto i_q = find(on, "gfl.i_q");
  f.switch_currents = i_d.has_value() && i_q.has_value();
  if (f.switch_currents) {
    f.current.i_d = *i_d;
    f.current.i_q = *i_q;
  }
  return f;
}

ScenarioSpec make_scenario(const Preset& preset, Variant variant) {
  ScenarioSpec s;
  s.preset = preset.name;
  s.variant = variant;
  s.plant = preset.plant();
  if (variant == Variant::PllEnhanced) s.plant.gfl.k_i = 0.0;
  if (variant == Variant::VsgOriginal) s.plant.gfm.k_omega = 0.0;
  s.events = fault_events(s.plant, *scenario_fault(preset, variant));
  s.step = {1e-4, 5.0, 10};
  return s;
}

ScenarioSpec fig7_scenario(FigVariant which) {
  return make_scenario(preset_table2(),
                       which == FigVariant::Original ? Variant::PllOriginal : Variant::PllEnhanced);
}

ScenarioSpec fig8_scenario(FigVariant which) {
  return make_scenario(preset_table2(),
                       which == FigVariant::Original ? Variant::VsgOriginal : Variant::VsgEnhanced);
}

ScenarioResult run_fig7(FigVariant which) { return run_scenario(fig7_scenario(which)); }
ScenarioResult run_fig8(FigVariant which) { return run_scenario(fig8_scenario(which)); }

std::string analogy_report(const Preset* preset) {
  struct Row {
    const char* gfl;
    const char* gfm;
    const char* relation;
  };
  static constexpr Row rows[] = {
      {"k_p", "D", "k_p ~ 1/D, similar to frequency droop gain and in inverse proportion to damping"},
      {"k_i", "J", "k_i = J = 0 reduces both to a first-order system without oscillation"},
      {"k_i", "m_i", "k_i ~ m_i, integral action removes the static error of output power"},
      {"omega_c", "J", "J ~ 1/omega_c, inertia in inverse proportion to the power filter cut-off"},
  };

  std::ostringstream os;
  os.precision(6);
  os << "grid-following | grid-forming | relationship";
  if (preset) os << " | mapping (" << preset->name << ")";
  os << '\n';

  std::string mapping[4];
  if (preset) {
    const GridParams& g = preset->grid;
    const CurrentSetpoint& c = preset->current_normal;
    std::ostringstream m0, m1, m2, m3;
    m0.precision(6);
    m1.precision(6);
    m2.precision(6);
    m3.precision(6);
    try {
      const EquivalentSwing gfl = gfl_to_swing(preset->gfl, g, c);
      const Equilibria eq = find_equilibria(gfl);
      m0 << "D_eq = k_p*v_g*cos(d)/k_i - l_g*i_d";
      if (eq.sep) m0 << " = " << gfl.damping_at(*eq.sep) << " at d_s = " << *eq.sep;
      m1 << "J_eq = (1 - k_p*l_g*i_d)/k_i = " << gfl.j_eq;
      m2 << "k_i = " << preset->gfl.ki() << " rad/s^2 per p.u.";
      m3 << "J = " << preset->gfm.j << " (" << preset->gfm.j / preset->gfm.power_base
         << " p.u.)";
    } catch (const Error& e) {
      m0 << e.what();
    }
    mapping[0] = m0.str();
    mapping[1] = m1.str();
    mapping[2] = m2.str();
    mapping[3] = m3.str();
  }
  for (int r = 0; r < 4; ++r) {
    os << rows[r].gfl << " | " << rows[r].gfm << " | " << rows[r].relation;
    if (preset) os << " | " << mapping[r];
    os << '\n';
  }
  return os.str();
}

SweepResult sweep(const SweepSpec& spec, int jobs) {
  if (spec.axes.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one axis");
  SweepResult result;
  std::size_t total = 1;
  for (const SweepAxis& a : spec.axes) {
    if (a.values.empty()) throw Error(ErrorCode::InvalidArgument, "empty sweep axis " + a.key);
    result.keys.push_back(a.key);
    total *= a.values.size();
  }
  result.rows.resize(total);

  parallel_for(total, jobs, [&](std::size_t index) {
    SweepRow& row = result.rows[index];
    row.values.resize(spec.axes.size());
    std::size_t rest = index;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& vals = spec.axes[a].values;
      row.values[a] = vals[rest % vals.size()];
      rest /= vals.size();
    }
    row.margin = kNaN;
    row.settle_time = kNaN;
    try {
      ScenarioSpec s = spec.base;
      std::optional<FaultSpec> fault = spec.fault;
      for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const std::string& key = spec.axes[a].key;
        if (is_fault_key(key)) {
          if (!fault) throw Error(ErrorCode::ConfigError, key + " needs a fault timeline");
          set_fault_key(*fault, spec.base.plant.grid.v_g, key, row.values[a]);
        } else {
          set_param(s.plant, key, row.values[a]);
        }
      }
      if (fault) s.events = fault_events(s.plant, *fault);
      const ScenarioResult r = run_scenario(s);
      row.verdict = r.slipped() ? "PoleSlip" : std::string(to_string(r.windows.back().verdict.kind));
      if (r.stable()) row.settle_time = r.windows.back().verdict.time;
      try {
        row.margin = sweep_margin(s, fault, r);
      } catch (const Error&) {
        row.margin = kNaN;
      }
    } catch (const std::exception& e) {
      row.verdict = "Error";
      row.error = e.what();
    }
  });
  return result;
}

}  // namespace syncarena
