#include "syncarena/model.hpp"

namespace syncarena {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularAlgebraicLoop: return "SingularAlgebraicLoop";
    case ErrorCode::NonPositiveInertia: return "NonPositiveInertia";
    case ErrorCode::ZeroIntegralGain: return "ZeroIntegralGain";
    case ErrorCode::ZeroDamping: return "ZeroDamping";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NoEquilibrium: return "NoEquilibrium";
    case ErrorCode::DegenerateLevelSet: return "DegenerateLevelSet";
    case ErrorCode::NeverStable: return "NeverStable";
    case ErrorCode::AlwaysStable: return "AlwaysStable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double pll_loop_gain(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur) {
  return 1.0 - gfl.kp() * grid.l_g() * cur.i_d;
}

double gfl_integrator_for(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur,
                          double delta, double delta_dot) {
  const double v_nom = pccq_at_nominal(grid, cur, delta);
  const double den = gfl.resolve_loop ? pll_loop_gain(gfl, grid, cur) : 1.0;
  return den * delta_dot - gfl.kp() * v_nom;
}

EquivalentSwing gfl_to_swing(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur) {
  if (gfl.ki() == 0.0) {
    throw Error(ErrorCode::ZeroIntegralGain, "k_i = 0 has no second-order form");
  }
  const double den = gfl.resolve_loop ? pll_loop_gain(gfl, grid, cur) : 1.0;
  if (den <= 0.0) {
    throw Error(ErrorCode::NonPositiveInertia, "1 - k_p*l_g*i_d <= 0");
  }
  EquivalentSwing sw;
  sw.j_eq = den / gfl.ki();
  sw.p0_eq = grid.omega_0 * grid.l_g() * cur.i_d + grid.r_g * cur.i_q;
  sw.pem_eq = grid.v_g;
  sw.damping = GflAngleDamping{gfl.kp(), gfl.ki(), grid.v_g,
                               gfl.resolve_loop ? grid.l_g() : 0.0, cur.i_d};
  return sw;
}

double gfm_pem(const GfmParams& gfm, const GridParams& grid) {
  return gfm.pem_factor * grid.v_pcc * grid.v_g / grid.x_g;
}

EquivalentSwing gfm_to_swing(const GfmParams& gfm, const GridParams& grid) {
  EquivalentSwing sw;
  sw.j_eq = gfm.j / gfm.power_base;
  sw.p0_eq = gfm.p_0;
  sw.pem_eq = gfm_pem(gfm, grid);
  sw.damping = ConstantDamping{(gfm.d + gfm.k_omega) / gfm.power_base};
  return sw;
}

double gfl_first_order_rhs(const GflParams& gfl, const GridParams& grid, const CurrentSetpoint& cur,
                           double delta) {
  const double v_nom = pccq_at_nominal(grid, cur, delta);
  if (!gfl.resolve_loop) return gfl.kp() * v_nom;
  const double den = pll_loop_gain(gfl, grid, cur);
  if (std::abs(den) < kSingularLoopTolerance) {
    throw Error(ErrorCode::SingularAlgebraicLoop, "1 - k_p*l_g*i_d vanishes");
  }
  return gfl.kp() * v_nom / den;
}

double gfm_first_order_rhs(const GfmParams& gfm, double pem, double delta) {
  const double d = (gfm.d + gfm.k_omega) / gfm.power_base;
  if (d == 0.0) throw Error(ErrorCode::ZeroDamping, "first-order VSG needs D > 0");
  return (gfm.p_0 - pem * std::sin(delta)) / d;
}

}  // namespace syncarena
