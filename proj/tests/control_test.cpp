#include <cmath>

#include <gtest/gtest.h>

#include "syncarena/control.hpp"
#include "syncarena/errors.hpp"
#include "syncarena/model.hpp"

namespace syncarena {
namespace {

TEST(AdaptiveInertiaBang, Branches) {
  EXPECT_EQ(adaptive_inertia_bang(300.0, 5.0, 0.1, 0.5), 1500.0);
  EXPECT_EQ(adaptive_inertia_bang(300.0, 5.0, 0.1, -0.5), 300.0);
  EXPECT_EQ(adaptive_inertia_bang(300.0, 5.0, 0.0, 7.0), 300.0);
  EXPECT_EQ(adaptive_inertia_bang(300.0, 5.0, -0.1, -0.5), 1500.0);
}

TEST(AdaptiveInertiaLinear, Values) {
  EXPECT_EQ(adaptive_inertia_linear(300.0, 100.0, 0.0, 3.0), 300.0);
  EXPECT_DOUBLE_EQ(adaptive_inertia_linear(300.0, 100.0, 0.2, 1.0), 320.0);
  EXPECT_DOUBLE_EQ(adaptive_inertia_linear(300.0, 1e6, -1.0, 1.0), kLinearInertiaFloor * 300.0);
}

GfmParams preset_like() {
  GfmParams g;
  g.d = 100.0;
  g.k_omega = 3900.0;
  return g;
}

TEST(EnhancedGfm, EquilibriumIsFixedPoint) {
  const GfmParams g = preset_like();
  const double pem = 1.2;
  const Vec2d r = enhanced_gfm_rhs(g, pem, SwingState(std::asin(g.p_0 / pem), 0.0));
  EXPECT_NEAR(r.norm(), 0.0, 1e-15);
}

TEST(EnhancedGfm, AcceleratingAwayUsesLargeInertia) {
  const GfmParams g = preset_like();
  // Below the SEP with a small positive rate: accelerating and moving away from ω0.
  const SwingState s(0.0, 1e-5);
  EXPECT_EQ(enhanced_gfm_inertia(g, 1.2, s), 1500.0);
  const Vec2d r = enhanced_gfm_rhs(g, 1.2, s);
  EXPECT_DOUBLE_EQ(r(1), (0.8 - 4000.0 * 1e-5) / 1500.0);
  // Returning: rate and acceleration of opposite sign.
  EXPECT_EQ(enhanced_gfm_inertia(g, 1.2, SwingState(1.2, 1e-5)), 300.0);
}

TEST(EnhancedGfm, DegeneratesToPlainSwing) {
  GfmParams g;
  g.k_omega = 0.0;
  g.n = 1.0;
  GridParams grid;
  const double pem = gfm_pem(g, grid);
  const EquivalentSwing sw = gfm_to_swing(g, grid);
  for (double d = -2.0; d < 2.0; d += 0.3) {
    for (double w = -0.5; w < 0.5; w += 0.17) {
      const SwingState s(d, w);
      EXPECT_EQ(enhanced_gfm_rhs(g, pem, s), swing_rhs(sw, s));
    }
  }
}

TEST(AdaptiveKp, ThreeBranches) {
  const double kp = 0.3;
  const double kvq = 0.6;
  EXPECT_EQ(adaptive_kp(kp, kvq, 0.0), kp);
  EXPECT_EQ(adaptive_kp(kp, kvq, -kp / kvq), 0.0);
  EXPECT_EQ(adaptive_kp(kp, kvq, 0.3), kp);
  EXPECT_EQ(adaptive_kp(kp, kvq, -0.9), 0.0);
  EXPECT_DOUBLE_EQ(adaptive_kp(kp, kvq, -0.2), 0.3 - 0.12);
}

TEST(AdaptiveKp, MonotoneContinuousBounded) {
  const double kp = 0.3;
  const double kvq = 0.6;
  double prev = adaptive_kp(kp, kvq, -2.0);
  for (double v = -2.0; v <= 2.0; v += 1e-3) {
    const double k = adaptive_kp(kp, kvq, v);
    EXPECT_GE(k, prev);
    EXPECT_LE(k - prev, kvq * 1e-3 + 1e-15);
    EXPECT_GE(k, 0.0);
    EXPECT_LE(k, kp);
    prev = k;
  }
}

TEST(EnhancedPllFreq, QuadraticTerm) {
  const double w0 = kOmega0;
  EXPECT_EQ(enhanced_pll_freq(w0, 0.3, 0.6, 0.0), w0);
  for (double v : {-0.4, -0.25, -0.1, -0.01}) {
    EXPECT_NEAR(enhanced_pll_freq(w0, 0.3, 0.6, v), w0 + 0.3 * v + 0.6 * v * v, 1e-13);
    EXPECT_GE(enhanced_pll_freq(w0, 0.3, 0.6, v), w0 + 0.3 * v);
  }
  EXPECT_EQ(enhanced_pll_freq(w0, 0.3, 0.6, -0.8), w0);
  EXPECT_EQ(enhanced_pll_freq(w0, 0.3, 0.6, 0.2), w0 + 0.3 * 0.2);
}

TEST(CompensatingCurrent, RatioAndMagnitude) {
  const double l = 0.5 / kOmega0;
  const CurrentSetpoint c = compensating_current(kOmega0, l, 0.05, 1.0);
  EXPECT_NEAR(c.i_d, 0.099504, 5e-7);
  EXPECT_NEAR(c.i_q, -0.995037, 5e-7);
  EXPECT_NEAR(std::hypot(c.i_d, c.i_q), 1.0, 1e-15);
  EXPECT_NEAR(kOmega0 * l * c.i_d + 0.05 * c.i_q, 0.0, 1e-16);
}

TEST(CompensatingCurrent, LimitsAndErrors) {
  const CurrentSetpoint inf = compensating_current(kOmega0, 1e-3, HUGE_VAL, 2.0);
  EXPECT_EQ(inf.i_d, 2.0);
  EXPECT_EQ(inf.i_q, 0.0);
  const CurrentSetpoint big = compensating_current(kOmega0, 1e-3, 1e9, 1.0);
  EXPECT_NEAR(big.i_d, 1.0, 1e-12);
  EXPECT_THROW(compensating_current(kOmega0, 1e-3, 0.0, 1.0), Error);
  EXPECT_THROW(compensating_current(kOmega0, 1e-3, 0.05, 0.0), Error);
}

TEST(EnhancedPllRhs, SolvesTheImplicitLoop) {
  GflParams gfl;
  gfl.gain_base = kOmega0;
  GridParams g;
  const CurrentSetpoint cur{1.0, 0.0, 1.0};
  for (double d = -3.0; d < 3.0; d += 0.05) {
    const EnhancedPllRate r = enhanced_pll_rhs(gfl, g, cur, d);
    // Residual of v = v_pccq(δ, ω0 + k_p,ad(v)·v).
    const double v = pcc_voltage(g, d, g.omega_0 + r.delta_dot, cur)(1);
    EXPECT_NEAR(v, r.v_pccq, 1e-12);
    EXPECT_EQ(r.kp_ad, adaptive_kp(gfl.kp(), gfl.kvq(), r.v_pccq));
    EXPECT_DOUBLE_EQ(r.delta_dot, r.kp_ad * r.v_pccq);
  }
}

TEST(Variants, NamesRoundTrip) {
  EXPECT_EQ(all_variants().size(), 8u);
  for (Variant v : all_variants()) EXPECT_EQ(parse_variant(variant_name(v)), v);
  EXPECT_FALSE(parse_variant("pll-magic").has_value());
  EXPECT_TRUE(is_grid_forming(Variant::VsgEnhanced));
  EXPECT_FALSE(is_grid_forming(Variant::PllFrozen));
}

}  // namespace
}  // namespace syncarena
