#include "syncarena/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "syncarena/basin.hpp"
#include "syncarena/config.hpp"
#include "syncarena/csv.hpp"
#include "syncarena/errors.hpp"
#include "syncarena/scenario.hpp"
#include "syncarena/stability.hpp"

namespace syncarena {
namespace {

namespace fs = std::filesystem;

constexpr int kExitStable = 0;
constexpr int kExitError = 1;
constexpr int kExitUnstable = 2;

struct Globals {
  std::optional<std::string> config;
  std::string preset = "table2";
  std::optional<std::string> variant;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<double> t_end;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> sets;
};

struct EacOpts {
  std::optional<double> clear_angle;
};

struct RoaOpts {
  int resolution = 801;
  bool shifted = false;
  std::string vdot = "printed";
  int samples = 0;
};

struct BasinOpts {
  std::optional<double> delta_min, delta_max, rate_min, rate_max;
  int n_delta = 41;
  int n_rate = 41;
  bool with_events = false;
};

struct SweepOpts {
  std::vector<std::string> axes;
};

std::string variant_list() {
  std::string s;
  for (Variant v : all_variants()) {
    if (!s.empty()) s += ", ";
    s += variant_name(v);
  }
  return s;
}

std::pair<std::string, std::string> split_key_value(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::ConfigError, "expected key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

fs::path out_dir(const Globals& g) {
  fs::path dir = ".";
  if (g.out) {
    dir = *g.out;
  } else if (const char* env = std::getenv("SYNCARENA_OUT"); env && *env) {
    dir = env;
  }
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  return os;
}

ScenarioSpec build_spec(const Globals& g) {
  ScenarioSpec spec;
  std::optional<Variant> variant;
  if (g.variant) {
    variant = parse_variant(*g.variant);
    if (!variant) {
      throw Error(ErrorCode::ConfigError,
                  "unknown variant '" + *g.variant + "' (expected one of " + variant_list() + ")");
    }
  }
  if (g.config) {
    spec = load_config(*g.config);
    if (variant) spec.variant = *variant;
  } else {
    const Preset p = find_preset(g.preset);
    spec = make_scenario(p, variant.value_or(p.variant));
  }
  if (g.dt) spec.step.dt = *g.dt;
  if (g.t_end) {
    spec.step.t_end = *g.t_end;
    std::erase_if(spec.events, [&](const TimedEvent& e) { return e.t > *g.t_end; });
  }
  for (const std::string& s : g.sets) {
    const auto [k, v] = split_key_value(s);
    set_param(spec.plant, k, parse_double(v));
  }
  return spec;
}

const EquivalentSwing& require_swing(const ControllerDynamics& d) {
  if (!d.swing()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(variant_name(d.variant())) + " has no second-order swing form");
  }
  return *d.swing();
}

PlantParams plant_at(const ScenarioSpec& spec, double t) {
  PlantParams p = spec.plant;
  for (const TimedEvent& e : spec.events) {
    if (e.t <= t) apply_sets(p, e.sets);
  }
  return p;
}

int cmd_sim(const Globals& g, std::ostream& out) {
  const ScenarioSpec spec = build_spec(g);
  const ScenarioResult r = run_scenario(spec);
  const fs::path dir = out_dir(g);
  {
    std::ofstream os = open_out(dir / "trajectory.csv");
    write_trajectory_csv(os, r.trajectory);
  }
  std::ostringstream summary;
  summary << "variant=" << variant_name(spec.variant) << '\n';
  summary << "delta0=" << format_double(r.initial(0)) << '\n';
  summary << "delta_dot0=" << format_double(r.initial(1)) << '\n';
  for (std::size_t w = 0; w < r.windows.size(); ++w) {
    const WindowVerdict& v = r.windows[w];
    const std::string p = "window" + std::to_string(w) + ".";
    summary << p << "t_begin=" << format_double(v.t_begin) << '\n';
    summary << p << "t_end=" << format_double(v.t_end) << '\n';
    summary << p << "verdict=" << to_string(v.verdict.kind) << '\n';
    summary << p << "time=" << format_double(v.verdict.time) << '\n';
  }
  summary << "slipped=" << (r.slipped() ? 1 : 0) << '\n';
  summary << "stable=" << (r.stable() ? 1 : 0) << '\n';
  {
    std::ofstream os = open_out(dir / "summary.txt");
    os << summary.str();
  }
  out << summary.str();
  return r.stable() ? kExitStable : kExitUnstable;
}

int cmd_eac(const Globals& g, const EacOpts& o, std::ostream& out) {
  const ScenarioSpec spec = build_spec(g);
  const double t_on = spec.events.empty() ? 0.0 : spec.events.front().t;
  const double t_clear = spec.events.size() >= 2 ? spec.events[1].t : t_on;
  const SwingState init = initial_state(spec);
  const ControllerDynamics pre(spec.variant, plant_at(spec, -1.0));
  const ControllerDynamics fault(spec.variant, spec.events.empty() ? pre.plant() : plant_at(spec, t_on));
  const ControllerDynamics post(spec.variant,
                                spec.events.size() >= 2 ? plant_at(spec, t_clear) : fault.plant());

  std::ostringstream os;
  EacResult r;
  if (is_grid_forming(spec.variant)) {
    double delta_clear = init(0);
    if (o.clear_angle) {
      delta_clear = *o.clear_angle;
    } else if (t_clear > t_on) {
      delta_clear = propagate(require_swing(fault), init, t_clear - t_on, spec.step.dt)(0);
    }
    r = eac_gfm(require_swing(fault), require_swing(post), init(0), delta_clear);
    os << "mode=gfm\n";
    os << "delta_b=" << format_double(init(0)) << '\n';
    os << "delta_clear=" << format_double(delta_clear) << '\n';
    try {
      const CriticalClearing cc = critical_clearing(require_swing(fault), require_swing(post), init,
                                                    ClearingMethod::Eac);
      os << "critical_angle=" << format_double(cc.angle) << '\n';
      os << "critical_time=" << format_double(cc.time) << '\n';
    } catch (const Error& e) {
      os << "critical=" << to_string(e.code()) << '\n';
    }
  } else {
    r = eac_gfl(require_swing(pre), require_swing(fault), init);
    os << "mode=gfl\n";
    os << "delta_b=" << format_double(init(0)) << '\n';
  }
  os << "s_plus=" << format_double(r.s_plus) << '\n';
  os << "s_minus=" << format_double(r.s_minus) << '\n';
  os << "margin=" << format_double(r.margin) << '\n';
  os << "stable=" << (r.stable ? 1 : 0) << '\n';
  std::ofstream file = open_out(out_dir(g) / "eac.txt");
  file << os.str();
  out << os.str();
  return r.stable ? kExitStable : kExitUnstable;
}

int cmd_roa(const Globals& g, const RoaOpts& o, std::ostream& out) {
  const ScenarioSpec spec = build_spec(g);
  const ControllerDynamics dyn(spec.variant, spec.plant);
  const EquivalentSwing& sw = require_swing(dyn);
  const Equilibria eq = find_equilibria(sw);
  RoaOptions ropts;
  ropts.resolution = o.resolution;
  if (o.vdot == "numeric") {
    ropts.vdot = VdotSource::Numeric;
  } else if (o.vdot != "printed") {
    throw Error(ErrorCode::ConfigError, "--vdot must be printed or numeric");
  }
  const fs::path dir = out_dir(g);
  std::ostringstream os;
  for (EnergyKind kind : {EnergyKind::Classic, EnergyKind::Modified}) {
    const EnergyFunction f = EnergyFunction::from_swing(sw, kind, o.shifted);
    const RoaEstimate roa = estimate_roa(f, eq, ropts);
    const std::string name(to_string(kind));
    {
      std::ofstream file = open_out(dir / ("roa_" + name + ".csv"));
      write_roa_csv(file, roa);
    }
    os << name << ".c=" << format_double(roa.c) << '\n';
    os << name << ".area=" << format_double(roa.area) << '\n';
    os << name << ".area_vdot=" << format_double(roa.area_vdot) << '\n';
    if (o.samples > 0) {
      const auto states = sample_interior(roa, f, static_cast<std::size_t>(o.samples), g.seed);
      BasinProblem problem{spec.variant, spec.plant, {}, spec.step, {}};
      const auto verdicts = classify_states(problem, states, g.jobs);
      std::size_t bad = 0;
      for (SyncKind k : verdicts) bad += k != SyncKind::Stable;
      os << name << ".samples=" << states.size() << '\n';
      os << name << ".violations=" << bad << '\n';
    }
  }
  {
    std::ofstream file = open_out(dir / "roa_summary.txt");
    file << os.str();
  }
  out << os.str();
  return kExitStable;
}

int cmd_basin(const Globals& g, const BasinOpts& o, std::ostream& out) {
  const ScenarioSpec spec = build_spec(g);
  BasinProblem problem{spec.variant, spec.plant, {}, spec.step, {}};
  if (o.with_events) problem.events = spec.events;
  PhaseGrid grid;
  grid.delta_min = o.delta_min.value_or(-kPi);
  grid.delta_max = o.delta_max.value_or(kPi);
  grid.delta_dot_min = o.rate_min.value_or(-40.0);
  grid.delta_dot_max = o.rate_max.value_or(40.0);
  grid.n_delta = o.n_delta;
  grid.n_delta_dot = o.n_rate;
  const BasinMap map = basin_oracle(problem, grid, g.jobs);
  std::size_t counts[3] = {0, 0, 0};
  for (SyncKind k : map.verdicts) ++counts[static_cast<int>(k)];
  {
    std::ofstream file = open_out(out_dir(g) / "basin.csv");
    write_basin_csv(file, map);
  }
  out << "cells=" << map.verdicts.size() << '\n';
  out << "stable=" << counts[0] << '\n';
  out << "pole_slip=" << counts[1] << '\n';
  out << "undetermined=" << counts[2] << '\n';
  return kExitStable;
}

// key=v1,v2,... or key=start:stop:count
SweepAxis parse_axis(const std::string& text) {
  const auto [key, list] = split_key_value(text);
  SweepAxis axis{key, {}};
  if (list.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(list);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error(ErrorCode::ConfigError, "range must be start:stop:count");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const double n = parse_double(parts[2]);
    if (!(n >= 1.0) || n != std::floor(n)) throw Error(ErrorCode::ConfigError, "range count must be >= 1");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) axis.values.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  } else {
    std::stringstream ss(list);
    for (std::string p; std::getline(ss, p, ',');) axis.values.push_back(parse_double(p));
  }
  if (axis.values.empty()) throw Error(ErrorCode::ConfigError, "empty axis " + key);
  return axis;
}

int cmd_sweep(const Globals& g, const SweepOpts& o, std::ostream& out) {
  SweepSpec spec;
  spec.base = build_spec(g);
  spec.fault = infer_fault(spec.base);
  for (const std::string& a : o.axes) spec.axes.push_back(parse_axis(a));
  const SweepResult result = sweep(spec, g.jobs);
  {
    std::ofstream file = open_out(out_dir(g) / "sweep.csv");
    write_sweep_csv(file, result);
  }
  std::size_t stable = 0;
  std::size_t errors = 0;
  for (const SweepRow& r : result.rows) {
    stable += r.verdict == "Stable";
    errors += r.verdict == "Error";
  }
  out << "rows=" << result.rows.size() << '\n';
  out << "stable=" << stable << '\n';
  out << "errors=" << errors << '\n';
  return kExitStable;
}

int cmd_analogy(const Globals& g, bool symbolic, std::ostream& out) {
  if (symbolic) {
    out << analogy_report(nullptr);
  } else {
    const Preset p = find_preset(g.preset);
    out << analogy_report(&p);
  }
  return kExitStable;
}

int cmd_presets(std::ostream& out) {
  for (const std::string& name : preset_names()) {
    const Preset p = find_preset(name);
    out << name << " variant=" << variant_name(p.variant) << " lines=" << to_string(p.lines)
        << " x_g=" << format_double(p.grid.x_g) << " r_g=" << format_double(p.grid.r_g) << '\n';
  }
  return kExitStable;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transient synchronization stability of grid-following and grid-forming converters"};
  app.footer("Variants: " + variant_list() + "\nExit codes: 0 stable, 2 unstable, 1 error.");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Scenario file")->check(CLI::ExistingFile);
  app.add_option("--preset", g.preset, "Preset name (see `presets`)");
  app.add_option("--variant", g.variant, "Controller variant: " + variant_list());
  app.add_option("--out", g.out, "Output directory (default $SYNCARENA_OUT or .)");
  app.add_option("--dt", g.dt, "Integration step [s]")->check(CLI::PositiveNumber);
  app.add_option("--t-end", g.t_end, "Horizon [s]")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for sampled checks");
  app.add_option("--set", g.sets, "Parameter override key=value (repeatable)");

  auto* sim = app.add_subcommand("sim", "Simulate a scenario and classify each window");
  EacOpts eac_opts;
  auto* eac = app.add_subcommand("eac", "Equal-area margin of the scenario's fault");
  eac->add_option("--clear-angle", eac_opts.clear_angle, "Clearing angle [rad] (grid-forming)");
  RoaOpts roa_opts;
  auto* roa = app.add_subcommand("roa", "Classic and modified energy level-set estimates");
  roa->add_option("--resolution", roa_opts.resolution, "Grid nodes per axis")->check(CLI::Range(3, 10001));
  roa->add_flag("--shifted", roa_opts.shifted, "Use delta - sep in the |delta*delta_dot| term");
  roa->add_option("--vdot", roa_opts.vdot, "printed or numeric");
  roa->add_option("--samples", roa_opts.samples, "Interior samples to verify by simulation");
  BasinOpts basin_opts;
  auto* basin = app.add_subcommand("basin", "Brute-force verdict map over initial states");
  basin->add_option("--delta-min", basin_opts.delta_min);
  basin->add_option("--delta-max", basin_opts.delta_max);
  basin->add_option("--rate-min", basin_opts.rate_min);
  basin->add_option("--rate-max", basin_opts.rate_max);
  basin->add_option("--n-delta", basin_opts.n_delta)->check(CLI::PositiveNumber);
  basin->add_option("--n-rate", basin_opts.n_rate)->check(CLI::PositiveNumber);
  basin->add_flag("--with-events", basin_opts.with_events, "Apply the scenario timeline");
  SweepOpts sweep_opts;
  auto* sw = app.add_subcommand("sweep", "Verdicts over a parameter grid");
  sw->add_option("--axis", sweep_opts.axes, "key=v1,v2,... or key=start:stop:count")->required();
  bool symbolic = false;
  auto* analogy = app.add_subcommand("analogy", "Grid-following / grid-forming analogy table");
  analogy->add_flag("--symbolic", symbolic, "Omit the preset's numbers");
  auto* presets = app.add_subcommand("presets", "List presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitStable : kExitError;
  }

  try {
    if (*sim) return cmd_sim(g, out);
    if (*eac) return cmd_eac(g, eac_opts, out);
    if (*roa) return cmd_roa(g, roa_opts, out);
    if (*basin) return cmd_basin(g, basin_opts, out);
    if (*sw) return cmd_sweep(g, sweep_opts, out);
    if (*analogy) return cmd_analogy(g, symbolic, out);
    if (*presets) return cmd_presets(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace syncarena
