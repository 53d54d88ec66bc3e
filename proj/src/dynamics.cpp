#include "syncarena/dynamics.hpp"

#include <cmath>
#include <limits>

#include "syncarena/model.hpp"

namespace syncarena {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_integrator(Variant v) {
  return v == Variant::PllOriginal || v == Variant::PllFrozen || v == Variant::PllCompensating;
}

}  // namespace

ControllerDynamics::ControllerDynamics(Variant variant, const PlantParams& plant)
    : variant_(variant), plant_(plant), current_(plant.current) {
  if (variant_ == Variant::PllCompensating && plant_.fault) {
    current_ = compensating_current(plant_.grid.omega_0, plant_.grid.l_g(), plant_.grid.r_g,
                                    plant_.current.i_rated);
  }
  if (is_grid_forming(variant_)) {
    p0_ = plant_.gfm.p_0;
    pem_ = gfm_pem(plant_.gfm, plant_.grid);
    if (variant_ == Variant::VsgOriginal) {
      swing_ = gfm_to_swing(plant_.gfm, plant_.grid);
    } else if (variant_ == Variant::VsgEnhanced) {
      GfmParams at_j0 = plant_.gfm;
      at_j0.j = at_j0.j_0;
      swing_ = gfm_to_swing(at_j0, plant_.grid);
    }
  } else {
    const GridParams& g = plant_.grid;
    p0_ = g.omega_0 * g.l_g() * current_.i_d + g.r_g * current_.i_q;
    pem_ = g.v_g;
    if (has_integrator(variant_) && plant_.gfl.ki() > 0.0) {
      swing_ = gfl_to_swing(plant_.gfl, g, current_);
    }
  }
}

bool ControllerDynamics::frozen() const {
  return variant_ == Variant::PllFrozen && plant_.fault;
}

GflParams ControllerDynamics::first_order_gfl() const {
  GflParams g = plant_.gfl;
  g.k_i = 0.0;
  return g;
}

Vec2d ControllerDynamics::rhs(const Vec2d& y) const {
  switch (variant_) {
    case Variant::PllOriginal:
    case Variant::PllCompensating:
      return gfl_full_rhs(plant_.gfl, plant_.grid, current_, y);
    case Variant::PllFrozen:
      if (frozen()) return Vec2d::Zero();
      return gfl_full_rhs(plant_.gfl, plant_.grid, current_, y);
    case Variant::PllFirstOrder:
      return {gfl_first_order_rhs(first_order_gfl(), plant_.grid, current_, y(0)), 0.0};
    case Variant::PllEnhanced:
      return {enhanced_pll_rhs(first_order_gfl(), plant_.grid, current_, y(0)).delta_dot, 0.0};
    case Variant::VsgOriginal:
      return swing_rhs(*swing_, y);
    case Variant::VsgEnhanced:
      return enhanced_gfm_rhs(plant_.gfm, pem_, y);
    case Variant::VsgFirstOrder:
      return {gfm_first_order_rhs(plant_.gfm, pem_, y(0)), 0.0};
  }
  return Vec2d::Zero();
}

SwingState ControllerDynamics::to_swing(const Vec2d& y) const {
  if (variant_ == Variant::VsgOriginal || variant_ == Variant::VsgEnhanced) return y;
  return {y(0), rhs(y)(0)};
}

Vec2d ControllerDynamics::from_swing(const SwingState& s) const {
  if (variant_ == Variant::VsgOriginal || variant_ == Variant::VsgEnhanced) return s;
  if (has_integrator(variant_)) {
    return {s(0), gfl_integrator_for(plant_.gfl, plant_.grid, current_, s(0), s(1))};
  }
  return {s(0), 0.0};
}

Equilibria ControllerDynamics::equilibria() const { return find_equilibria(p0_, pem_); }

Observables ControllerDynamics::observe(const Vec2d& y) const {
  const SwingState s = to_swing(y);
  Observables o{kNaN, kNaN, kNaN, kNaN};
  const double pb = plant_.gfm.power_base;
  double j_pu = 0.0;
  switch (variant_) {
    case Variant::PllOriginal:
    case Variant::PllFrozen:
    case Variant::PllCompensating:
    case Variant::PllFirstOrder:
    case Variant::PllEnhanced: {
      const double omega_pll =
          plant_.grid.omega_0 + (plant_.gfl.resolve_loop ? s(1) : 0.0);
      o.v_pccq = pcc_voltage(plant_.grid, s(0), omega_pll, current_)(1);
      if (variant_ == Variant::PllEnhanced) {
        o.kp_eff = adaptive_kp(plant_.gfl.kp(), plant_.gfl.kvq(), o.v_pccq);
      } else {
        o.kp_eff = frozen() ? 0.0 : plant_.gfl.kp();
      }
      j_pu = swing_ ? swing_->j_eq : 0.0;
      o.j_eff = j_pu;
      break;
    }
    case Variant::VsgOriginal:
      o.j_eff = plant_.gfm.j;
      j_pu = plant_.gfm.j / pb;
      break;
    case Variant::VsgEnhanced:
      o.j_eff = enhanced_gfm_inertia(plant_.gfm, pem_, s);
      j_pu = plant_.gfm.j_0 / pb;
      break;
    case Variant::VsgFirstOrder:
      o.j_eff = 0.0;
      break;
  }
  const Equilibria eq = equilibria();
  if (eq.sep) {
    const double e_0 = p0_ * *eq.sep + pem_ * std::cos(*eq.sep);
    o.energy = 0.5 * j_pu * s(1) * s(1) + e_0 - p0_ * s(0) - pem_ * std::cos(s(0));
  }
  return o;
}

}  // namespace syncarena
