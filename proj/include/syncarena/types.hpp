#pragma once

#include <numbers>
#include <variant>

#include <Eigen/Core>

namespace syncarena {

template <typename T>
using Vec2 = Eigen::Matrix<T, 2, 1>;
using Vec2d = Vec2<double>;

/// Phase-plane point (δ, δ̇) in rad and rad/s. δ is never wrapped.
using SwingState = Vec2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kOmega0 = 100.0 * kPi;

/// Base quantities of the per-unit system.
struct PerUnitBase {
  double s_n = 0.05e6;      // VA
  double v_n_peak = 311.0;  // V
  double omega_0 = kOmega0; // rad/s
  double i_n = 107.0;       // A
};

/// Single-line equivalent of the grid seen from the PCC.
///
/// The inductance entering the dq voltage algebra is l_g = x_g / omega_0
/// (seconds, per-unit convention). v_pcc is the PCC voltage magnitude used
/// by the grid-forming power transfer and is held constant.
struct GridParams {
  double r_g = 0.025;
  double x_g = 0.45;
  double v_g = 1.0;
  double x_t = 0.2;
  double x_f = 0.15;
  double v_pcc = 1.05;
  double omega_0 = kOmega0;

  [[nodiscard]] double l_g() const { return x_g / omega_0; }
};

struct CurrentSetpoint {
  double i_d = 0.0;
  double i_q = 0.0;
  double i_rated = 1.0;
};

/// PLL gains. The stored values are multiplied by gain_base before use, so a
/// preset can keep gains quoted against per-unit frequency (gain_base = ω0).
struct GflParams {
  double k_p = 0.3;
  double k_i = 4.0;
  double k_vq = 0.6;
  double gain_base = 1.0;
  // false: approximate ω_pll ≈ ω0 inside the impedance drop.
  bool resolve_loop = true;

  [[nodiscard]] double kp() const { return k_p * gain_base; }
  [[nodiscard]] double ki() const { return k_i * gain_base; }
  [[nodiscard]] double kvq() const { return k_vq * gain_base; }
};

/// Virtual synchronous generator parameters.
///
/// j, j_0, d, k_omega and k_lin are divided by power_base when the per-unit
/// swing is built; power_base = S_n reads them as SI values against power in W.
/// pem_factor is 1 for the per-unit transfer v_pcc·v_g/x_g and 1.5 for the
/// three-phase physical form.
struct GfmParams {
  double j = 300.0;
  double d = 4000.0;
  double p_0 = 0.8;
  double j_0 = 300.0;
  double n = 5.0;
  double k_omega = 0.0;
  double k_lin = 0.0;
  double power_base = 1.0;
  double pem_factor = 1.0;
};

struct ConstantDamping {
  double d = 0.0;
};

/// d_eq(δ) = k_p·v_g·cos δ / k_i − l_g·i_d for the PLL-based swing.
struct GflAngleDamping {
  double k_p = 0.0;
  double k_i = 1.0;
  double v_g = 0.0;
  double l_g = 0.0;
  double i_d = 0.0;

  template <typename T>
  [[nodiscard]] T operator()(const T& delta) const {
    using std::cos;
    return k_p * v_g * cos(delta) / k_i - l_g * i_d;
  }
};

using Damping = std::variant<ConstantDamping, GflAngleDamping>;

/// Coefficients of J_eq·δ̈ = P0_eq − D_eq·δ̇ − P_em,eq·sin δ.
struct EquivalentSwing {
  double j_eq = 1.0;
  double p0_eq = 0.0;
  double pem_eq = 0.0;
  Damping damping = ConstantDamping{};

  template <typename T>
  [[nodiscard]] T damping_at(const T& delta) const {
    if (const auto* c = std::get_if<ConstantDamping>(&damping)) return T(c->d);
    return std::get<GflAngleDamping>(damping)(delta);
  }
};

}  // namespace syncarena
