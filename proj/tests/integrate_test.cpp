#include <cmath>

#include <Eigen/Core>
#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "syncarena/integrate.hpp"
#include "syncarena/model.hpp"

namespace syncarena {
namespace {

// Linearization of the per-unit grid-forming swing about its SEP.
Eigen::Matrix2d linear_swing() {
  const double j = 0.006;
  const double d = 0.08;
  const double k = (1.05 / 0.45) * std::cos(std::asin(0.8 / (1.05 / 0.45)));
  Eigen::Matrix2d a;
  a << 0.0, 1.0, -k / j, -d / j;
  return a;
}

Vec2d integrate_linear(const Eigen::Matrix2d& a, Vec2d y, double t, double dt) {
  const long n = std::lround(t / dt);
  for (long k = 0; k < n; ++k) y = rk4_step([&](const Vec2d& x) -> Vec2d { return a * x; }, y, dt);
  return y;
}

TEST(Rk4, UnitOscillatorPeriod) {
  const double period = 2.0 * kPi;
  const double dt = period / 1000.0;
  Vec2d y(1.0, 0.0);
  for (int k = 0; k < 1000; ++k) {
    y = rk4_step([](const Vec2d& x) { return Vec2d(x(1), -x(0)); }, y, dt);
  }
  EXPECT_NEAR(y(0), 1.0, 1e-9);
  EXPECT_NEAR(y(1), 0.0, 1e-9);
}

TEST(Rk4, ZeroFieldLeavesStateUnchanged) {
  const Vec2d y(0.3, -2.0);
  EXPECT_EQ(rk4_step([](const Vec2d&) { return Vec2d::Zero().eval(); }, y, 0.1), y);
}

TEST(Rk4, NonFiniteThrows) {
  try {
    rk4_step([](const Vec2d&) { return Vec2d(HUGE_VAL, 0.0); }, Vec2d(0.0, 0.0), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteState);
  }
}

TEST(Rk4, FourthOrderAgainstMatrixExponential) {
  const Eigen::Matrix2d a = linear_swing();
  const Vec2d y0(0.2, 1.0);
  const double t = 1.0;
  const Vec2d exact = (a * t).exp() * y0;
  const double e1 = (integrate_linear(a, y0, t, 1e-2) - exact).norm();
  const double e2 = (integrate_linear(a, y0, t, 5e-3) - exact).norm();
  EXPECT_GE(std::log2(e1 / e2), 3.9);
}

TEST(Rk4, HalvingStepAgainstFineReference) {
  const Eigen::Matrix2d a = linear_swing();
  const Vec2d y0(0.2, 1.0);
  const double h = 1e-2;
  const Vec2d ref = integrate_linear(a, y0, 1.0, h / 16.0);
  const double e1 = (integrate_linear(a, y0, 1.0, h) - ref).norm();
  const double e2 = (integrate_linear(a, y0, 1.0, h / 2.0) - ref).norm();
  EXPECT_GE(e1 / e2, 12.0);
}

PlantParams gfm_plant() {
  PlantParams p;
  p.gfm.d = 100.0;
  p.gfm.k_omega = 3900.0;
  p.gfm.power_base = 5e4;
  return p;
}

TEST(Simulate, ConstantAtEquilibrium) {
  const PlantParams p = gfm_plant();
  const double sep = std::asin(0.8 / gfm_pem(p.gfm, p.grid));
  const Trajectory t = simulate(Variant::VsgOriginal, p, SwingState(sep, 0.0), {}, {1e-4, 0.5, 100});
  ASSERT_EQ(t.samples.size(), 51u);
  for (const Sample& s : t.samples) {
    EXPECT_NEAR(s.delta, sep, 1e-14);
    EXPECT_NEAR(s.delta_dot, 0.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(t.samples.back().t, 0.5);
}

TEST(Simulate, EventSplitsStepAtItsTime) {
  const PlantParams p = gfm_plant();
  const double dt = 1e-4;
  const double t_ev = 1.5e-4;
  const SwingState s0(0.1, 0.0);
  const TimedEvent ev{t_ev, {{"grid.v_g", 0.5}}};
  const Trajectory traj = simulate(Variant::VsgOriginal, p, s0, {ev}, {dt, 3e-4, 1});

  // Hand-split reference.
  PlantParams after = p;
  after.grid.v_g = 0.5;
  const EquivalentSwing a = gfm_to_swing(p.gfm, p.grid);
  const EquivalentSwing b = gfm_to_swing(after.gfm, after.grid);
  auto fa = [&](const Vec2d& y) { return swing_rhs(a, y); };
  auto fb = [&](const Vec2d& y) { return swing_rhs(b, y); };
  Vec2d y = rk4_step(fa, s0, dt);
  y = rk4_step(fa, y, t_ev - dt);
  y = rk4_step(fb, y, 2 * dt - t_ev);
  y = rk4_step(fb, y, dt);
  ASSERT_EQ(traj.samples.size(), 4u);
  EXPECT_NEAR(traj.samples[3].delta, y(0), 1e-15);
  EXPECT_NEAR(traj.samples[3].delta_dot, y(1), 1e-14);
}

TEST(Simulate, EventAtGridTimeIsInForceAtThatSample) {
  PlantParams p;
  p.gfl.gain_base = kOmega0;
  p.current = {1.0, 0.0, 1.0};
  const TimedEvent ev{2e-4, {{"grid.v_g", 0.2}}};
  const Trajectory t = simulate(Variant::PllOriginal, p, SwingState(0.4, 0.0), {ev}, {1e-4, 4e-4, 1});
  const double sin_d = std::sin(t.samples[2].delta);
  // v_pccq reflects the new grid voltage.
  EXPECT_NEAR(t.samples[2].v_pccq + 0.2 * sin_d, p.grid.omega_0 * p.grid.l_g() * (1.0 + t.samples[2].delta_dot / p.grid.omega_0) , 1e-9);
}

TEST(Simulate, Deterministic) {
  const PlantParams p = gfm_plant();
  const TimedEvent ev{0.1, {{"grid.v_g", 0.2}}};
  const auto a = simulate(Variant::VsgEnhanced, p, SwingState(0.3, 0.0), {ev}, {1e-4, 0.5, 7});
  const auto b = simulate(Variant::VsgEnhanced, p, SwingState(0.3, 0.0), {ev}, {1e-4, 0.5, 7});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].delta, b.samples[i].delta);
    EXPECT_EQ(a.samples[i].delta_dot, b.samples[i].delta_dot);
  }
}

TEST(Simulate, DivergenceCarriesTime) {
  PlantParams p;
  p.gfm.p_0 = 1e300;
  p.gfm.j = 1e-300;
  try {
    simulate(Variant::VsgOriginal, p, SwingState(0.0, 0.0), {}, {1e-3, 1.0, 1});
    FAIL();
  } catch (const NonFiniteStateError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LE(e.time(), 1.0);
  }
}

TEST(Simulate, RejectsBadInput) {
  const PlantParams p = gfm_plant();
  EXPECT_THROW(simulate(Variant::VsgOriginal, p, SwingState(0, 0), {}, {0.0, 1.0, 1}), Error);
  EXPECT_THROW(simulate(Variant::VsgOriginal, p, SwingState(0, 0), {{2.0, {}}}, {1e-3, 1.0, 1}),
               Error);
  EXPECT_THROW(simulate(Variant::VsgOriginal, p, SwingState(NAN, 0), {}, {1e-3, 1.0, 1}), Error);
}

TEST(Simulate, UndampedEnergyDrift) {
  PlantParams p = gfm_plant();
  p.gfm.d = 0.0;
  p.gfm.k_omega = 0.0;
  const Trajectory t = simulate(Variant::VsgOriginal, p, SwingState(0.1, 2.0), {}, {1e-4, 10.0, 10});
  double lo = t.samples.front().energy;
  double hi = lo;
  for (const Sample& s : t.samples) {
    lo = std::min(lo, s.energy);
    hi = std::max(hi, s.energy);
  }
  EXPECT_LT(hi - lo, 1e-6);
}

TEST(DiscreteDeltaStep, Values) {
  const auto same = discrete_delta_step(0.8, 0.8, 300.0, 1e-3, 0.25);
  EXPECT_EQ(same.delta_inc, 0.25);
  EXPECT_EQ(same.accel, 0.0);
  const auto r = discrete_delta_step(0.4, 0.0, 300.0, 1e-3, 0.0);
  EXPECT_NEAR(r.delta_inc, 1.333e-9, 5e-13);
  EXPECT_NEAR(r.accel, 1.333e-3, 5e-7);
  EXPECT_EQ(discrete_delta_step(0.4, 0.0, 600.0, 1e-3, 0.0).accel, r.accel / 2.0);
}

TEST(SyncMonitor, ConstantAtSepIsStableAtZero) {
  SyncMonitor m(0.3, kPi - 0.3);
  for (int k = 0; k <= 300; ++k) m.feed(k * 1e-3, 0.3, 0.0);
  EXPECT_EQ(m.verdict().kind, SyncKind::Stable);
  EXPECT_EQ(m.verdict().time, 0.0);
}

TEST(SyncMonitor, EscapeIsPoleSlip) {
  SyncMonitor m(0.3, kPi - 0.3);
  for (int k = 0; k <= 1000; ++k) m.feed(k * 1e-3, 0.3 + 5.0 * k * 1e-3, 5.0);
  const SyncVerdict v = m.verdict();
  EXPECT_EQ(v.kind, SyncKind::PoleSlip);
  // δ crosses the UEP at (π − 0.6)/5 s.
  EXPECT_NEAR(v.time, (kPi - 0.6) / 5.0, 1.1e-3);
}

TEST(SyncMonitor, WithoutEquilibriumOnlyDriftCounts) {
  SyncMonitor slow(std::nullopt, std::nullopt);
  for (int k = 0; k <= 100; ++k) slow.feed(k * 0.01, 0.05 * k, 0.05);
  EXPECT_EQ(slow.verdict().kind, SyncKind::Undetermined);
  SyncMonitor fast(std::nullopt, std::nullopt);
  for (int k = 0; k <= 100; ++k) fast.feed(k * 0.01, 0.1 * k, 10.0);
  EXPECT_EQ(fast.verdict().kind, SyncKind::PoleSlip);
}

TEST(SyncMonitor, NeedsDwell) {
  SyncMonitor m(0.0, kPi);
  for (int k = 0; k <= 100; ++k) m.feed(k * 1e-3, 0.0, 0.0);
  EXPECT_EQ(m.verdict().kind, SyncKind::Undetermined);
  EXPECT_FALSE(m.decided());
}

}  // namespace
}  // namespace syncarena
