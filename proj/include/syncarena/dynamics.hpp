#pragma once

#include <optional>

#include "syncarena/control.hpp"
#include "syncarena/plant.hpp"
#include "syncarena/stability.hpp"

namespace syncarena {

/// Controller internals recorded alongside (δ, δ̇). Fields that do not apply to
/// a variant are NaN.
struct Observables {
  double v_pccq = 0.0;
  double j_eff = 0.0;
  double kp_eff = 0.0;
  double energy = 0.0;
};

/// Vector field of one controller variant under a fixed parameter bundle.
///
/// The integrated coordinates are variant specific: PLL variants with an
/// integrator carry (δ, x) so that x stays continuous across events, VSG
/// variants carry (δ, δ̇), and first-order variants carry (δ, 0).
class ControllerDynamics {
 public:
  ControllerDynamics(Variant variant, const PlantParams& plant);

  [[nodiscard]] Variant variant() const { return variant_; }
  [[nodiscard]] const PlantParams& plant() const { return plant_; }
  /// Current setpoint actually applied (compensating variant may override).
  [[nodiscard]] const CurrentSetpoint& current() const { return current_; }

  [[nodiscard]] Vec2d rhs(const Vec2d& y) const;
  [[nodiscard]] SwingState to_swing(const Vec2d& y) const;
  [[nodiscard]] Vec2d from_swing(const SwingState& s) const;
  [[nodiscard]] Observables observe(const Vec2d& y) const;

  /// Driving and electrical power amplitude in swing coordinates.
  [[nodiscard]] double p0_eq() const { return p0_; }
  [[nodiscard]] double pem_eq() const { return pem_; }
  [[nodiscard]] Equilibria equilibria() const;
  /// Second-order mapping, absent for first-order variants.
  [[nodiscard]] const std::optional<EquivalentSwing>& swing() const { return swing_; }

 private:
  [[nodiscard]] bool frozen() const;
  [[nodiscard]] GflParams first_order_gfl() const;

  Variant variant_;
  PlantParams plant_;
  CurrentSetpoint current_;
  double p0_ = 0.0;
  double pem_ = 0.0;
  std::optional<EquivalentSwing> swing_;
};

}  // namespace syncarena
