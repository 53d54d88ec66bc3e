#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "syncarena/types.hpp"

namespace syncarena {

/// Stable/unstable equilibria of p0 = pem·sin δ on the branch cos(sep) > 0.
struct Equilibria {
  std::optional<double> sep;
  std::optional<double> uep;

  [[nodiscard]] bool exist() const { return sep.has_value() && uep.has_value(); }
};

/// sep = arcsin(p0/pem), uep = π − sep; both absent when pem ≤ 0 or |p0/pem| > 1.
Equilibria find_equilibria(double p0_eq, double pem_eq);
Equilibria find_equilibria(const EquivalentSwing& sw);

/// ∫_a^b (p0 − pem·sin δ) dδ in closed form.
double power_area(double p0, double pem, double a, double b);

struct EacResult {
  double s_plus = 0.0;
  double s_minus = 0.0;
  double margin = 0.0;  // available − required
  bool stable = false;
};

/// Equal-area test for a PLL jumping from the pre-fault state into the fault
/// system. Required area: ∫_{δ_B}^{δ_C} v_pccq dδ plus the kinetic energy of
/// the post-jump rate; available: |∫_{∓π/2}^{δ_C} v_pccq dδ|, the limit being
/// on the side the jump heads to (damping turns negative past ±π/2).
/// Throws NoEquilibrium when the fault system has no SEP.
EacResult eac_gfl(const EquivalentSwing& pre_fault, const EquivalentSwing& fault,
                  const SwingState& init);

/// Equal-area test for a VSG: accelerating area over [δ_B, δ_clear] in the
/// fault system against the decelerating area from δ_clear to the post-fault
/// UEP. s_plus is a signed net area. Throws NoEquilibrium for the post system.
EacResult eac_gfm(const EquivalentSwing& fault, const EquivalentSwing& post, double delta_b,
                  double delta_clear);

enum class ClearingMethod { Eac, Simulation };

struct ClearingOptions {
  double dt = 1e-4;
  double horizon = 5.0;     // post-fault simulation span
  double t_max = 10.0;      // cap on the fault-on duration searched
  double angle_tol = 1e-3;  // rad
  double time_tol = 1e-4;   // s
};

struct CriticalClearing {
  double angle = 0.0;
  double time = 0.0;
};

/// Critical clearing angle and time of a VSG-type fault. The EAC route
/// bisects on the margin sign (init taken at rest); the simulation route
/// bisects the clearing time on "no pole slip within the horizon".
/// Throws NeverStable / AlwaysStable when no bracket exists.
CriticalClearing critical_clearing(const EquivalentSwing& fault, const EquivalentSwing& post,
                                   const SwingState& init, ClearingMethod via,
                                   const ClearingOptions& opts = {});

/// Fault-on time for δ to first reach `angle` from `init`, or nullopt if it
/// does not within t_max.
std::optional<double> time_to_angle(const EquivalentSwing& sw, const SwingState& init,
                                    double angle, double dt, double t_max);

/// State after integrating sw for `duration` seconds (last step shortened).
SwingState propagate(const EquivalentSwing& sw, const SwingState& init, double duration, double dt);

enum class EnergyKind { Classic, Modified };

std::string_view to_string(EnergyKind kind);

/// Lyapunov-type energy for the generic swing with constant damping.
///
/// Classic: J·δ̇²/2 + e_0 − P0·δ − Pem·cos δ.
/// Modified: classic + D·|δ·δ̇|, δ absolute unless `shifted` (then δ − sep).
/// e_0 makes V(sep, 0) = 0.
struct EnergyFunction {
  EnergyKind kind = EnergyKind::Classic;
  double j = 1.0;
  double d = 0.0;
  double p_0 = 0.0;
  double pem = 0.0;
  double e_0 = 0.0;
  double sep = 0.0;
  bool shifted = false;

  /// Angle-dependent damping is frozen at its SEP value.
  /// Throws NoEquilibrium if sw has no SEP.
  static EnergyFunction from_swing(const EquivalentSwing& sw, EnergyKind kind, bool shifted = false);

  [[nodiscard]] double coupling_angle(double delta) const { return shifted ? delta - sep : delta; }
};

template <typename T>
T energy(const EnergyFunction& f, const Vec2<T>& s) {
  using std::abs;
  using std::cos;
  T v = 0.5 * f.j * s(1) * s(1) + f.e_0 - f.p_0 * s(0) - f.pem * cos(s(0));
  if (f.kind == EnergyKind::Modified) {
    v += f.d * abs((f.shifted ? T(s(0) - f.sep) : s(0)) * s(1));
  }
  return v;
}

/// −(D/J)·|δ·(P0 − D·δ̇ − Pem·sin δ)|, in closed form.
double vdot_modified(const EnergyFunction& f, const SwingState& s);

/// −D·δ̇², the exact derivative of the classic energy along the flow.
double vdot_classic(const EnergyFunction& f, const SwingState& s);

/// Directional derivative of V along the constant-damping swing field by a
/// central difference.
double vdot_numeric(const EnergyFunction& f, const SwingState& s, double h = 1e-7);

struct VdotComparison {
  double max_abs_difference = 0.0;
  double max_numeric = 0.0;      // > 0 means V increased somewhere
  std::size_t sign_mismatches = 0;
  std::size_t samples = 0;
};

/// Differentiates the energy along a simulated trajectory and compares it
/// with vdot_modified at the midpoints.
VdotComparison compare_vdot(const EnergyFunction& f, const EquivalentSwing& sw,
                            const SwingState& init, double duration, double dt);

enum class VdotSource { Printed, Numeric };

struct RoaOptions {
  int resolution = 801;
  VdotSource vdot = VdotSource::Printed;
};

struct RoaEstimate {
  EnergyKind kind = EnergyKind::Classic;
  double c = 0.0;
  /// Closed polyline of (δ, δ̇) vertices on V = c enclosing the SEP.
  std::vector<Vec2d> boundary;
  /// Shoelace area of the boundary (rad²/s).
  double area = 0.0;
  /// Area of the enclosed sublevel set after removing cells where V̇ > 0.
  double area_vdot = 0.0;
};

/// Level set V = c through the nearer saddle, extracted by marching squares
/// over δ ∈ [sep − 2π, uep] × δ̇ ∈ ±1.05·sqrt(2c/J) with vertices refined onto
/// the level by bisection. Throws DegenerateLevelSet when no closed contour
/// around the SEP exists.
RoaEstimate estimate_roa(const EnergyFunction& f, const Equilibria& eq, const RoaOptions& opts = {});

bool point_in_polygon(const std::vector<Vec2d>& poly, const Vec2d& p);
double polygon_area(const std::vector<Vec2d>& poly);

/// Uniform samples strictly inside the estimate (inside the boundary and
/// below the level), deterministic for a given seed.
std::vector<SwingState> sample_interior(const RoaEstimate& roa, const EnergyFunction& f,
                                        std::size_t count, std::uint64_t seed);

}  // namespace syncarena
