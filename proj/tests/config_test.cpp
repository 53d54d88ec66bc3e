#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "syncarena/config.hpp"
#include "syncarena/csv.hpp"
#include "syncarena/errors.hpp"

namespace syncarena {
namespace {

ScenarioSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << text;
  return {};
}

TEST(FormatDouble, RoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, kOmega0, -2.5e-300, 5e4, 0.0, 1e300}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(HUGE_VAL), "inf");
  EXPECT_EQ(format_double(-HUGE_VAL), "-inf");
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_THROW(parse_double("1.0x"), Error);
  EXPECT_THROW(parse_double(""), Error);
}

TEST(Config, RoundTripIsExact) {
  for (const std::string& name : preset_names()) {
    for (Variant v : all_variants()) {
      const ScenarioSpec a = make_scenario(find_preset(name), v);
      const std::string text = write_config(a);
      const ScenarioSpec b = parse(text);
      EXPECT_EQ(write_config(b), text);
      for (const std::string& key : param_keys()) {
        const double x = get_param(a.plant, key);
        const double y = get_param(b.plant, key);
        EXPECT_TRUE(x == y || (std::isnan(x) && std::isnan(y))) << key;
      }
      EXPECT_EQ(a.events, b.events);
      EXPECT_EQ(a.variant, b.variant);
      EXPECT_EQ(a.step.dt, b.step.dt);
      EXPECT_EQ(a.step.t_end, b.step.t_end);
      EXPECT_EQ(a.step.record_every, b.step.record_every);
    }
  }
}

TEST(Config, ExplicitInitAndOverrides) {
  const ScenarioSpec s = parse(
      "preset = table2-gfm\n"
      "# comment\n"
      "[grid]\n"
      "x_g = 0.6   # trailing\n"
      "[solver]\n"
      "init = explicit\n"
      "delta0 = 0.1\n"
      "delta_dot0 = -2\n"
      "t_end = 1\n");
  EXPECT_EQ(s.variant, Variant::VsgEnhanced);
  EXPECT_EQ(s.plant.grid.x_g, 0.6);
  EXPECT_EQ(s.init, InitPolicy::Explicit);
  EXPECT_EQ(s.init_state, SwingState(0.1, -2.0));
  EXPECT_EQ(s.step.t_end, 1.0);
  EXPECT_EQ(s.events.size(), 2u);
}

TEST(Config, EventsSectionReplacesTimeline) {
  const ScenarioSpec s = parse(
      "preset = table2\n"
      "[events]\n"
      "t=0.5 set grid.v_g=0.3 fault=1\n");
  ASSERT_EQ(s.events.size(), 1u);
  EXPECT_EQ(s.events[0].t, 0.5);
  EXPECT_EQ(s.events[0].sets, (std::vector<ParamSet>{{"grid.v_g", 0.3}, {"fault", 1.0}}));
  EXPECT_TRUE(parse("preset = table2\n[events]\n").events.empty());
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_NE(error_of("[grid]\nx_q = 1\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("[nowhere]\n").find("test.cfg:1"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nx_g = abc\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("preset = nope\n").find("test.cfg:1"), std::string::npos);
  EXPECT_NE(error_of("[solver]\nvariant = pll-magic\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("[events]\nt=1 grid.v_g=2\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("just words\n").find("test.cfg:1"), std::string::npos);
}

TEST(Config, MissingFileNamesPath) {
  try {
    load_config("/nonexistent/case.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/case.cfg"), std::string::npos);
  }
}

TEST(Csv, TrajectoryHeaderAndRows) {
  Trajectory t;
  t.samples.push_back({0.0, 0.5, std::nan(""), 0.0, 300.0, 0.0, 1.0});
  std::ostringstream os;
  write_trajectory_csv(os, t);
  EXPECT_EQ(os.str(), "t,delta,delta_dot,v_pccq,j_eff,kp_eff,energy\n0,0.5,nan,0,300,0,1\n");
}

TEST(Csv, BasinAndSweep) {
  BasinMap m;
  m.grid = PhaseGrid{0.0, 1.0, 0.0, 0.0, 2, 1};
  m.verdicts = {SyncKind::Stable, SyncKind::PoleSlip};
  std::ostringstream b;
  write_basin_csv(b, m);
  EXPECT_EQ(b.str(), "delta0,delta_dot0,verdict\n0,0,Stable\n1,0,PoleSlip\n");

  SweepResult r;
  r.keys = {"gfl.k_p"};
  r.rows.push_back({{0.3}, "Error", std::nan(""), std::nan(""), "bad, \"key\""});
  std::ostringstream s;
  write_sweep_csv(s, r);
  EXPECT_EQ(s.str(), "gfl.k_p,verdict,margin,settle_time,error\n0.3,Error,nan,nan,\"bad, \"\"key\"\"\"\n");
}

TEST(Csv, RoaHeader) {
  RoaEstimate roa;
  roa.kind = EnergyKind::Modified;
  roa.c = 2.5;
  roa.area = 10.0;
  roa.boundary = {{0.0, 1.0}};
  std::ostringstream os;
  write_roa_csv(os, roa);
  EXPECT_EQ(os.str(), "# c=2.5 kind=modified area=10\ndelta,delta_dot\n0,1\n");
}

}  // namespace
}  // namespace syncarena
