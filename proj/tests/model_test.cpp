#include <cmath>

#include <gtest/gtest.h>

#include "syncarena/errors.hpp"
#include "syncarena/integrate.hpp"
#include "syncarena/model.hpp"

namespace syncarena {
namespace {

GridParams single_line() {
  GridParams g;
  g.r_g = 0.05;
  g.x_g = 0.5;
  g.v_g = 1.0;
  return g;
}

TEST(PccVoltage, PureRotationWithoutCurrent) {
  GridParams g = single_line();
  g.r_g = 0.0;
  const Vec2d v = pcc_voltage(g, 0.0, kOmega0, CurrentSetpoint{});
  EXPECT_DOUBLE_EQ(v(0), 1.0);
  EXPECT_DOUBLE_EQ(v(1), 0.0);
}

TEST(PccVoltage, QuarterTurn) {
  const Vec2d v = pcc_voltage(single_line(), kPi / 2, kOmega0, CurrentSetpoint{});
  EXPECT_NEAR(v(0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(v(1), -1.0);
}

TEST(PccVoltage, ImpedanceDrop) {
  const Vec2d v = pcc_voltage(single_line(), 0.0, kOmega0, CurrentSetpoint{1.0, 0.0, 1.0});
  EXPECT_NEAR(v(0), 1.05, 1e-15);
  EXPECT_NEAR(v(1), 0.5, 1e-15);
}

TEST(PccVoltage, MagnitudeIsGridVoltageWithoutCurrent) {
  GridParams g = single_line();
  g.v_g = 0.7;
  for (double d = -7.0; d < 7.0; d += 0.37) {
    EXPECT_NEAR(pcc_voltage(g, d, kOmega0, CurrentSetpoint{}).norm(), 0.7, 1e-15);
  }
}

TEST(GflFullRhs, OriginIsEquilibrium) {
  const Vec2d r = gfl_full_rhs(GflParams{}, single_line(), CurrentSetpoint{}, Vec2d(0.0, 0.0));
  EXPECT_EQ(r(0), 0.0);
  EXPECT_EQ(r(1), 0.0);
}

TEST(GflFullRhs, ResolvedLoopRate) {
  const GridParams g = single_line();
  const Vec2d r = gfl_full_rhs(GflParams{}, g, CurrentSetpoint{1.0, 0.0, 1.0}, Vec2d(0.0, 0.0));
  const double hand = 0.3 * 0.5 / (1.0 - 0.3 * 0.5 / (100.0 * kPi));
  EXPECT_NEAR(r(0), hand, 1e-15);
  EXPECT_NEAR(r(0), 0.150072, 5e-7);
  // ẋ = k_i·v_pccq with ω_pll = ω0 + δ̇.
  const double v_q = 0.5 + r(0) * 0.5 / (100.0 * kPi);
  EXPECT_NEAR(r(1), 4.0 * v_q, 1e-14);
}

TEST(GflFullRhs, SingularLoopThrows) {
  GflParams gfl;
  const GridParams g = single_line();
  gfl.k_p = 1.0 / g.l_g();  // 1 − k_p·l_g·i_d = 0 at i_d = 1
  try {
    gfl_full_rhs(gfl, g, CurrentSetpoint{1.0, 0.0, 1.0}, Vec2d(0.1, 0.0));
    FAIL() << "expected SingularAlgebraicLoop";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularAlgebraicLoop);
  }
}

TEST(GflToSwing, NormalOperation) {
  const EquivalentSwing sw = gfl_to_swing(GflParams{}, single_line(), CurrentSetpoint{1.0, 0.0, 1.0});
  EXPECT_NEAR(sw.j_eq, 0.2498806, 5e-8);
  EXPECT_NEAR(sw.p0_eq, 0.5, 1e-15);
  EXPECT_EQ(sw.pem_eq, 1.0);
  ASSERT_TRUE(std::holds_alternative<GflAngleDamping>(sw.damping));
}

TEST(GflToSwing, FaultMode) {
  GridParams g = single_line();
  g.v_g = 0.2;
  const EquivalentSwing sw = gfl_to_swing(GflParams{}, g, CurrentSetpoint{0.0, -1.0, 1.0});
  EXPECT_EQ(sw.j_eq, 0.25);
  EXPECT_NEAR(sw.p0_eq, -0.05, 1e-17);
  EXPECT_EQ(sw.pem_eq, 0.2);
}

TEST(GflToSwing, NoCurrentNoDrivingPower) {
  EXPECT_EQ(gfl_to_swing(GflParams{}, single_line(), CurrentSetpoint{}).p0_eq, 0.0);
}

TEST(GflToSwing, Errors) {
  GflParams no_ki;
  no_ki.k_i = 0.0;
  try {
    gfl_to_swing(no_ki, single_line(), CurrentSetpoint{1.0, 0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroIntegralGain);
  }
  GflParams big;
  big.k_p = 2.0 / single_line().l_g();
  try {
    gfl_to_swing(big, single_line(), CurrentSetpoint{1.0, 0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveInertia);
  }
}

TEST(GfmToSwing, PresetValuesInRawUnits) {
  GfmParams gfm;
  gfm.d = 100.0;
  gfm.k_omega = 3900.0;
  GridParams g;
  const EquivalentSwing sw = gfm_to_swing(gfm, g);
  EXPECT_EQ(sw.j_eq, 300.0);
  EXPECT_EQ(sw.p0_eq, 0.8);
  EXPECT_EQ(sw.damping_at(0.3), 4000.0);
  EXPECT_DOUBLE_EQ(sw.pem_eq, 1.05 / 0.45);
}

TEST(GfmToSwing, PowerBaseScalesInertiaAndDamping) {
  GfmParams gfm;
  gfm.power_base = 5e4;
  const EquivalentSwing sw = gfm_to_swing(gfm, GridParams{});
  EXPECT_DOUBLE_EQ(sw.j_eq, 300.0 / 5e4);
  EXPECT_DOUBLE_EQ(sw.damping_at(0.0), 4000.0 / 5e4);
}

TEST(GfmToSwing, BoltedFaultHasNoTransfer) {
  GridParams g;
  g.v_g = 0.0;
  EXPECT_EQ(gfm_to_swing(GfmParams{}, g).pem_eq, 0.0);
}

TEST(SwingRhs, DirectSubstitution) {
  const EquivalentSwing sw{1.0, 0.8, 1.2, ConstantDamping{0.0}};
  const Vec2d r = swing_rhs(sw, Vec2d(0.0, 0.0));
  EXPECT_EQ(r(0), 0.0);
  EXPECT_DOUBLE_EQ(r(1), 0.8);
}

TEST(SwingRhs, EquilibriumIsFixedPoint) {
  const EquivalentSwing sw{0.3, 0.8, 1.2, ConstantDamping{0.5}};
  const Vec2d r = swing_rhs(sw, Vec2d(std::asin(0.8 / 1.2), 0.0));
  EXPECT_NEAR(r.norm(), 0.0, 1e-15);
}

TEST(SwingRhs, GflDampingIsEvenAndNegativePastQuarterTurn) {
  const GflAngleDamping d{0.3, 4.0, 1.0, 0.5 / kOmega0, 1.0};
  for (double x = 0.0; x < 4.0; x += 0.25) EXPECT_EQ(d(x), d(-x));
  EXPECT_DOUBLE_EQ(d(kPi), -0.3 / 4.0 - 0.5 / kOmega0);
  EXPECT_LT(d(kPi), 0.0);
}

TEST(SwingRhs, SignSymmetry) {
  const EquivalentSwing a{0.25, 0.3, 1.0, GflAngleDamping{0.3, 4.0, 1.0, 0.0, 0.0}};
  EquivalentSwing b = a;
  b.p0_eq = -a.p0_eq;
  const Vec2d s(0.4, -0.7);
  EXPECT_NEAR((swing_rhs(a, s) + swing_rhs(b, Vec2d(-s))).norm(), 0.0, 1e-15);
}

TEST(FirstOrder, Gfl) {
  GridParams g = single_line();
  EXPECT_EQ(gfl_first_order_rhs(GflParams{}, g, CurrentSetpoint{}, 0.0), 0.0);
  g.v_g = 0.2;
  EXPECT_NEAR(gfl_first_order_rhs(GflParams{}, g, CurrentSetpoint{0.0, -1.0, 1.0}, 0.0), -0.015,
              1e-17);
}

TEST(FirstOrder, Gfm) {
  GfmParams gfm;
  gfm.d = 4e3;
  EXPECT_DOUBLE_EQ(gfm_first_order_rhs(gfm, 1.2, 0.0), 2e-4);
  gfm.d = 0.0;
  try {
    gfm_first_order_rhs(gfm, 1.2, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroDamping);
  }
}

// Full PLL and its swing form integrated side by side from matched states.
TEST(ModelEquivalence, FullAndSwingAgree) {
  const GridParams g = single_line();
  const CurrentSetpoint cur{1.0, 0.0, 1.0};
  GflParams gfl;
  gfl.k_p = 30.0;
  gfl.k_i = 400.0;
  const EquivalentSwing sw = gfl_to_swing(gfl, g, cur);
  const SwingState s0(0.2, 1.5);
  Vec2d full(s0(0), gfl_integrator_for(gfl, g, cur, s0(0), s0(1)));
  Vec2d red = s0;
  const double dt = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    full = rk4_step([&](const Vec2d& y) { return gfl_full_rhs(gfl, g, cur, y); }, full, dt);
    red = rk4_step([&](const Vec2d& y) { return swing_rhs(sw, y); }, red, dt);
    worst = std::max(worst, std::abs(full(0) - red(0)));
  }
  EXPECT_LT(worst, 1e-6);
}

}  // namespace
}  // namespace syncarena
