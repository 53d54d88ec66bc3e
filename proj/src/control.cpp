#include "syncarena/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "syncarena/errors.hpp"
#include "syncarena/model.hpp"

namespace syncarena {
namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 8> kNames = {{
    {Variant::PllOriginal, "pll-original"},
    {Variant::PllEnhanced, "pll-enhanced"},
    {Variant::PllFrozen, "pll-frozen"},
    {Variant::PllFirstOrder, "pll-first-order"},
    {Variant::PllCompensating, "pll-compensating"},
    {Variant::VsgOriginal, "vsg-original"},
    {Variant::VsgEnhanced, "vsg-enhanced"},
    {Variant::VsgFirstOrder, "vsg-first-order"},
}};

}  // namespace

std::string_view variant_name(Variant v) {
  for (const auto& [variant, name] : kNames) {
    if (variant == v) return name;
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (const auto& [variant, n] : kNames) {
    if (n == name) return variant;
  }
  return std::nullopt;
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> all = [] {
    std::vector<Variant> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return all;
}

bool is_grid_forming(Variant v) {
  return v == Variant::VsgOriginal || v == Variant::VsgEnhanced || v == Variant::VsgFirstOrder;
}

double adaptive_inertia_bang(double j_0, double n, double omega_dev, double omega_rate) {
  return omega_dev * omega_rate > 0.0 ? n * j_0 : j_0;
}

double adaptive_inertia_linear(double j_0, double k_lin, double omega_dev, double omega_rate) {
  return std::max(j_0 + k_lin * omega_dev * omega_rate, kLinearInertiaFloor * j_0);
}

double enhanced_gfm_inertia(const GfmParams& gfm, double pem, const SwingState& s) {
  const double pb = gfm.power_base;
  const double accel_j0 =
      (gfm.p_0 - (gfm.d + gfm.k_omega) / pb * s(1) - pem * std::sin(s(0))) / (gfm.j_0 / pb);
  return adaptive_inertia_bang(gfm.j_0, gfm.n, s(1), accel_j0);
}

Vec2d enhanced_gfm_rhs(const GfmParams& gfm, double pem, const SwingState& s) {
  const double pb = gfm.power_base;
  const double j_ad = enhanced_gfm_inertia(gfm, pem, s) / pb;
  const double d = (gfm.d + gfm.k_omega) / pb;
  return {s(1), (gfm.p_0 - d * s(1) - pem * std::sin(s(0))) / j_ad};
}

double adaptive_kp(double k_p, double k_vq, double v_pccq) {
  if (k_vq <= 0.0 || v_pccq >= 0.0) return k_p;
  const double knot = -k_p / k_vq;
  if (v_pccq <= knot) return 0.0;
  return k_p + k_vq * v_pccq;
}

double enhanced_pll_freq(double omega_0, double k_p, double k_vq, double v_pccq) {
  return omega_0 + adaptive_kp(k_p, k_vq, v_pccq) * v_pccq;
}

CurrentSetpoint compensating_current(double omega_0, double l_g, double r_g, double i_rated) {
  if (!(r_g > 0.0) || !(i_rated > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "compensating current needs r_g > 0 and i_rated > 0");
  }
  const double x = omega_0 * l_g;
  if (std::isinf(r_g)) return {i_rated, 0.0, i_rated};
  const double h = std::hypot(r_g, x);
  return {i_rated * r_g / h, -i_rated * x / h, i_rated};
}

EnhancedPllRate enhanced_pll_rhs(const GflParams& gfl, const GridParams& grid,
                                 const CurrentSetpoint& cur, double delta) {
  const double kp = gfl.kp();
  const double kvq = gfl.kvq();
  const double v_nom = pccq_at_nominal(grid, cur, delta);
  // v = v_nom + l·g(v), g(v) = adaptive_kp(v)·v. h(v) = v − l·g(v) − v_nom is
  // strictly increasing while |l|·k_p < 1, so the root is unique.
  const double l = gfl.resolve_loop ? grid.l_g() * cur.i_d : 0.0;
  if (std::abs(1.0 - l * kp) < kSingularLoopTolerance) {
    throw Error(ErrorCode::SingularAlgebraicLoop, "1 - k_p*l_g*i_d vanishes");
  }
  double v = v_nom;
  if (l != 0.0) {
    const double knot = kvq > 0.0 ? -kp / kvq : -std::numeric_limits<double>::infinity();
    if (v_nom >= 0.0 || kvq <= 0.0) {
      v = v_nom / (1.0 - l * kp);
    } else if (v_nom <= knot) {
      v = v_nom;
    } else {
      // l·k_vq·v² + (l·k_p − 1)·v + v_nom = 0 on [knot, 0].
      const double a = l * kvq;
      const double b = l * kp - 1.0;
      const double c = v_nom;
      const double disc = std::sqrt(std::max(b * b - 4.0 * a * c, 0.0));
      const double q = -0.5 * (b - disc);
      const std::array<double, 2> roots = {c / q, q / a};
      v = roots[0];
      for (double r : roots) {
        if (r >= knot - 1e-12 && r <= 1e-12) {
          v = r;
          break;
        }
      }
    }
  }
  const double k = adaptive_kp(kp, kvq, v);
  return {k * v, v, k};
}

}  // namespace syncarena
