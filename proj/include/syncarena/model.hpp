#pragma once

#include <cmath>

#include "syncarena/errors.hpp"
#include "syncarena/types.hpp"

namespace syncarena {

/// |1 − k_p·l_g·i_d| below this makes the PLL's implicit δ̇ equation singular.
inline constexpr double kSingularLoopTolerance = 1e-9;

/// dq components of the PCC voltage: grid voltage rotated by δ plus the drop
/// across R_g + jω_pll·L_g.
template <typename T>
Vec2<T> pcc_voltage(const GridParams& grid, const T& delta, const T& omega_pll,
                    const CurrentSetpoint& cur) {
  using std::cos;
  using std::sin;
  const double l_g = grid.l_g();
  Vec2<T> v;
  v(0) = grid.v_g * cos(delta) + grid.r_g * cur.i_d - omega_pll * l_g * cur.i_q;
  v(1) = -grid.v_g * sin(delta) + omega_pll * l_g * cur.i_d + grid.r_g * cur.i_q;
  return v;
}

/// v_pccq with ω_pll = ω0, i.e. everything but the δ̇·l_g·i_d term.
template <typename T>
T pccq_at_nominal(const GridParams& grid, const CurrentSetpoint& cur, const T& delta) {
  using std::sin;
  return -grid.v_g * sin(delta) + grid.omega_0 * grid.l_g() * cur.i_d + grid.r_g * cur.i_q;
}

/// 1 − k_p·l_g·i_d, the coefficient multiplying δ̇ once ω_pll = ω0 + δ̇ is
/// substituted into v_pccq.
double pll_loop_gain(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur);

/// Full PLL model on the state (δ, x), x being the PI integrator output.
/// Returns (δ̇, ẋ). The algebraic loop through ω_pll is resolved exactly unless
/// gfl.resolve_loop is false.
template <typename T>
Vec2<T> gfl_full_rhs(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur,
                     const Vec2<T>& state) {
  const double l_i = grid.l_g() * cur.i_d;
  const T v_nom = pccq_at_nominal(grid, cur, state(0));
  Vec2<T> out;
  if (gfl.resolve_loop) {
    const double den = pll_loop_gain(gfl, grid, cur);
    if (std::abs(den) < kSingularLoopTolerance) {
      throw Error(ErrorCode::SingularAlgebraicLoop, "1 - k_p*l_g*i_d vanishes");
    }
    out(0) = (gfl.kp() * v_nom + state(1)) / den;
    out(1) = gfl.ki() * (v_nom + out(0) * l_i);
  } else {
    out(0) = gfl.kp() * v_nom + state(1);
    out(1) = gfl.ki() * v_nom;
  }
  return out;
}

/// Integrator value x that makes the full PLL model start at (δ, δ̇).
double gfl_integrator_for(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur,
                          double delta, double delta_dot);

/// Maps the PLL onto the generic swing form. Throws ZeroIntegralGain for
/// k_i = 0 (use the first-order model) and NonPositiveInertia when
/// 1 − k_p·l_g·i_d ≤ 0.
EquivalentSwing gfl_to_swing(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur);

/// Electrical power amplitude of the VSG, pem_factor·v_pcc·v_g / x_g.
double gfm_pem(const GfmParams& gfm, const GridParams& grid);

/// Per-unit VSG swing. Damping is d + k_omega; all of j, d, k_omega are
/// divided by power_base.
EquivalentSwing gfm_to_swing(const GfmParams& gfm, const GridParams& grid);

template <typename T>
Vec2<T> swing_rhs(const EquivalentSwing& sw, const Vec2<T>& s) {
  using std::sin;
  Vec2<T> out;
  out(0) = s(1);
  out(1) = (sw.p0_eq - sw.damping_at(s(0)) * s(1) - sw.pem_eq * sin(s(0))) / sw.j_eq;
  return out;
}

/// PLL with k_i = 0: δ̇ = k_p·v_pccq, loop through ω_pll resolved.
double gfl_first_order_rhs(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur,
                           double delta);

/// VSG with J = 0: δ̇ = (P0 − pem·sin δ)/D. Throws ZeroDamping for D = 0.
double gfm_first_order_rhs(const GfmParams& gfm, double pem, double delta);

}  // namespace syncarena
