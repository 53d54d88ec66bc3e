#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "syncarena/types.hpp"

namespace syncarena {

enum class Variant {
  PllOriginal,
  PllEnhanced,
  PllFrozen,
  PllFirstOrder,
  PllCompensating,
  VsgOriginal,
  VsgEnhanced,
  VsgFirstOrder,
};

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
const std::vector<Variant>& all_variants();
bool is_grid_forming(Variant v);

/// n·j_0 while the frequency deviation and its rate share a sign, else j_0.
/// A zero product takes the j_0 branch.
double adaptive_inertia_bang(double j_0, double n, double omega_dev, double omega_rate);

/// Fraction of j_0 the linear adaptive inertia is floored at.
inline constexpr double kLinearInertiaFloor = 0.01;

/// j_0 + k_lin·(ω − ω0)·dω/dt, floored at kLinearInertiaFloor·j_0.
double adaptive_inertia_linear(double j_0, double k_lin, double omega_dev, double omega_rate);

/// Inertia (in GfmParams units) the enhanced VSG applies at state s. The
/// accelerating/decelerating classification uses the acceleration under j_0,
/// whose sign does not depend on the positive inertia value.
double enhanced_gfm_inertia(const GfmParams& gfm, double pem, const SwingState& s);

/// Stability-enhanced VSG: J_ad·δ̈ = P0 − (D + k_ω)·δ̇ − pem·sin δ with
/// bang-bang J_ad. Per-unit conversion through gfm.power_base.
Vec2d enhanced_gfm_rhs(const GfmParams& gfm, double pem, const SwingState& s);

/// Piecewise PLL gain: 0 below −k_p/k_vq, k_p + k_vq·v on [−k_p/k_vq, 0], k_p above.
/// k_vq ≤ 0 disables the adaptation.
double adaptive_kp(double k_p, double k_vq, double v_pccq);

/// ω0 + adaptive_kp(...)·v_pccq.
double enhanced_pll_freq(double omega_0, double k_p, double k_vq, double v_pccq);

/// Current with i_q/i_d = −ω0·l_g/r_g at magnitude i_rated, which cancels the
/// PLL's equivalent driving power so the equilibrium sits at δ = 0.
CurrentSetpoint compensating_current(double omega_0, double l_g, double r_g, double i_rated);

struct EnhancedPllRate {
  double delta_dot = 0.0;
  double v_pccq = 0.0;
  double kp_ad = 0.0;
};

/// First-order PLL (k_i = 0) with adaptive k_p. v_pccq depends on δ̇ through
/// ω_pll, so the piecewise-quadratic loop equation is solved exactly.
EnhancedPllRate enhanced_pll_rhs(const GflParams& gfl, const GridParams& grid,
                                 const CurrentSetpoint& cur, double delta);

}  // namespace syncarena
