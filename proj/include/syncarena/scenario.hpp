#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncarena/control.hpp"
#include "syncarena/integrate.hpp"
#include "syncarena/plant.hpp"
#include "syncarena/stability.hpp"

namespace syncarena {

/// Which lines of the double-circuit connection are in service.
///
/// BothLines: x_t + (x_g1 ∥ x_g2), r_g1 ∥ r_g2. LineTrip: x_t + x_g1, r_g1.
/// LineOnly: x_g1, r_g1 without the transformer.
enum class LineConfig { BothLines, LineTrip, LineOnly };

std::string_view to_string(LineConfig lines);

/// Test-system parameters as tabulated, plus the single-line grid they reduce
/// to for the chosen line configuration.
struct Preset {
  std::string name;
  Variant variant = Variant::PllOriginal;
  LineConfig lines = LineConfig::BothLines;
  PerUnitBase base;
  double x_g1 = 0.5;
  double x_g2 = 0.5;
  double r_g1 = 0.05;
  double r_g2 = 0.05;
  double v_mref = 1.05;
  double v_g_fault = 0.2;
  GridParams grid;
  CurrentSetpoint current_normal;
  CurrentSetpoint current_fault;
  GflParams gfl;
  GfmParams gfm;

  /// Normal-operation parameter bundle.
  [[nodiscard]] PlantParams plant() const;
};

Preset preset_table2(LineConfig lines = LineConfig::BothLines);

/// table2, table2-gfl, table2-gfm, table2-line-trip, table2-line-only.
const std::vector<std::string>& preset_names();
/// Throws ConfigError for an unknown name.
Preset find_preset(std::string_view name);

/// Grid dip from t_on to t_clear. With switch_currents the setpoint moves to
/// `current` during the dip and back afterwards.
struct FaultSpec {
  double t_on = 2.0;
  double t_clear = 3.0;
  double v_g = 0.2;
  bool switch_currents = true;
  CurrentSetpoint current{0.0, -1.0, 1.0};
};

/// Two events: fault on and fault cleared. Cleared values come from `normal`.
std::vector<TimedEvent> fault_events(const PlantParams& normal, const FaultSpec& fault);

enum class InitPolicy { StartAtSep, Explicit };

std::string_view to_string(InitPolicy policy);

struct ScenarioSpec {
  std::string preset;
  Variant variant = Variant::PllOriginal;
  PlantParams plant;
  std::vector<TimedEvent> events;
  StepConfig step;
  InitPolicy init = InitPolicy::StartAtSep;
  SwingState init_state = SwingState::Zero();
};

/// Start-at-SEP uses the parameters after events at t = 0.
/// Throws NoEquilibrium if that system has no SEP.
SwingState initial_state(const ScenarioSpec& spec);

/// Verdict over [t_begin, t_end], judged against that window's equilibria
/// shifted by 2πk onto the branch the window starts on.
struct WindowVerdict {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::optional<double> sep;
  std::optional<double> uep;
  SyncVerdict verdict;
};

struct ScenarioResult {
  SwingState initial = SwingState::Zero();
  Trajectory trajectory;
  std::vector<WindowVerdict> windows;

  [[nodiscard]] bool slipped() const;
  /// No slip anywhere and the last window settled.
  [[nodiscard]] bool stable() const;
};

ScenarioResult run_scenario(const ScenarioSpec& spec);

/// Per-window verdicts for an existing trajectory; windows split at events.
std::vector<WindowVerdict> window_verdicts(const ScenarioSpec& spec, const Trajectory& traj);

FaultSpec fig7_fault(const Preset& preset);
FaultSpec fig8_fault(const Preset& preset);

/// The dip-and-recover timeline for a variant: the grid-following one for PLL
/// variants, the grid-forming one (shorter dip, no current switch) for VSG
/// variants. pll-enhanced runs with k_i = 0 and vsg-original with k_ω = 0.
ScenarioSpec make_scenario(const Preset& preset, Variant variant);
std::optional<FaultSpec> scenario_fault(const Preset& preset, Variant variant);

/// Reads a FaultSpec back from a two-event dip timeline (as written by
/// fault_events); nullopt for any other timeline.
std::optional<FaultSpec> infer_fault(const ScenarioSpec& spec);

enum class FigVariant { Original, Enhanced };

ScenarioSpec fig7_scenario(FigVariant which);
ScenarioSpec fig8_scenario(FigVariant which);
ScenarioResult run_fig7(FigVariant which);
ScenarioResult run_fig8(FigVariant which);

/// Table of the four grid-following / grid-forming correspondences. With a
/// preset, each row also prints the mapped numbers.
std::string analogy_report(const Preset* preset);

/// Axis over a plant key or one of fault.v_g, fault.depth, fault.t_on,
/// fault.t_clear (fault.depth sets v_g during the dip to (1 − depth)·v_g).
struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

struct SweepSpec {
  ScenarioSpec base;
  std::optional<FaultSpec> fault;
  std::vector<SweepAxis> axes;
};

struct SweepRow {
  std::vector<double> values;
  std::string verdict;  // Stable, PoleSlip, Undetermined or Error
  double margin = 0.0;  // equal-area margin, NaN if not applicable
  double settle_time = 0.0;  // last-window settle time, NaN unless Stable
  std::string error;
};

struct SweepResult {
  std::vector<std::string> keys;
  std::vector<SweepRow> rows;
};

/// Cartesian product of the axes, first axis slowest. Rows come back in that
/// order whatever the worker count; a failing point is recorded, not thrown.
SweepResult sweep(const SweepSpec& spec, int jobs);

}  // namespace syncarena
