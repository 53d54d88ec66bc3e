#include "syncarena/stability.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>

#include <Eigen/Core>

#include "syncarena/errors.hpp"
#include "syncarena/integrate.hpp"
#include "syncarena/level_set.hpp"
#include "syncarena/model.hpp"

namespace syncarena {
namespace {

constexpr int kCrossingBisections = 60;

Equilibria require_equilibria(const EquivalentSwing& sw, const char* what) {
  const Equilibria eq = find_equilibria(sw);
  if (!eq.exist()) throw Error(ErrorCode::NoEquilibrium, what);
  return eq;
}

SwingState swing_step(const EquivalentSwing& sw, const SwingState& s, double h) {
  return rk4_step([&sw](const Vec2d& y) { return swing_rhs<double>(sw, y); }, s, h);
}

// Swing field with the damping frozen at the energy function's value.
Vec2d frozen_field(const EnergyFunction& f, const SwingState& s) {
  return {s(1), (f.p_0 - f.d * s(1) - f.pem * std::sin(s(0))) / f.j};
}

// True when the post-fault swing started at s slips within the horizon.
bool slips(const EquivalentSwing& post, const Equilibria& eq, SwingState s,
           const ClearingOptions& opts) {
  SyncMonitor monitor(eq.sep, eq.uep);
  const long n = std::lround(opts.horizon / opts.dt);
  monitor.feed(0.0, s(0), s(1));
  for (long k = 1; k <= n; ++k) {
    s = swing_step(post, s, opts.dt);
    monitor.feed(static_cast<double>(k) * opts.dt, s(0), s(1));
    if (monitor.decided()) break;
  }
  return monitor.verdict().kind == SyncKind::PoleSlip;
}

}  // namespace

Equilibria find_equilibria(double p0_eq, double pem_eq) {
  if (!(pem_eq > 0.0)) return {};
  const double ratio = p0_eq / pem_eq;
  if (!(std::abs(ratio) <= 1.0)) return {};
  const double sep = std::asin(ratio);
  return {sep, kPi - sep};
}

Equilibria find_equilibria(const EquivalentSwing& sw) { return find_equilibria(sw.p0_eq, sw.pem_eq); }

double power_area(double p0, double pem, double a, double b) {
  return p0 * (b - a) + pem * (std::cos(b) - std::cos(a));
}

EacResult eac_gfl(const EquivalentSwing& pre_fault, const EquivalentSwing& fault,
                  const SwingState& init) {
  const Equilibria eq = require_equilibria(fault, "fault system has no equilibrium");
  const double delta_b = init(0);
  const double delta_c = *eq.sep;

  // The rate jumps with v_pccq while the integrator state is continuous.
  double rate = init(1);
  if (const auto* d = std::get_if<GflAngleDamping>(&fault.damping)) {
    const double x = pre_fault.j_eq * d->k_i * init(1) -
                     d->k_p * (pre_fault.p0_eq - pre_fault.pem_eq * std::sin(delta_b));
    rate = (d->k_p * (fault.p0_eq - fault.pem_eq * std::sin(delta_b)) + x) / (fault.j_eq * d->k_i);
  }

  int heading = -1;
  if (delta_c > delta_b || (delta_c == delta_b && rate > 0.0)) heading = 1;
  const double limit = heading * kPi / 2.0;

  EacResult r;
  r.s_minus = std::abs(power_area(fault.p0_eq, fault.pem_eq, delta_b, delta_c)) +
              0.5 * fault.j_eq * rate * rate;
  r.s_plus = std::abs(power_area(fault.p0_eq, fault.pem_eq, limit, delta_c));
  r.margin = r.s_plus - r.s_minus;
  r.stable = r.margin > 0.0;
  return r;
}

EacResult eac_gfm(const EquivalentSwing& fault, const EquivalentSwing& post, double delta_b,
                  double delta_clear) {
  const Equilibria eq = require_equilibria(post, "post-fault system has no equilibrium");
  if (delta_clear < delta_b) throw Error(ErrorCode::InvalidArgument, "delta_clear < delta_b");
  EacResult r;
  r.s_plus = power_area(fault.p0_eq, fault.pem_eq, delta_b, delta_clear);
  if (delta_clear < *eq.uep) {
    r.s_minus = std::abs(power_area(post.p0_eq, post.pem_eq, delta_clear, *eq.uep));
    r.margin = r.s_minus - r.s_plus;
  } else {
    // Cleared at or past the UEP: nothing left to decelerate.
    r.margin = -(std::abs(r.s_plus) + power_area(post.p0_eq, post.pem_eq, *eq.uep, delta_clear));
  }
  r.stable = r.margin > 0.0;
  return r;
}

std::optional<double> time_to_angle(const EquivalentSwing& sw, const SwingState& init, double angle,
                                    double dt, double t_max) {
  if (init(0) == angle) return 0.0;
  const double dir = angle > init(0) ? 1.0 : -1.0;
  SwingState s = init;
  const long n = std::lround(t_max / dt);
  for (long k = 0; k < n; ++k) {
    const SwingState next = swing_step(sw, s, dt);
    if (dir * (next(0) - angle) >= 0.0) {
      double lo = 0.0;
      double hi = dt;
      for (int it = 0; it < kCrossingBisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dir * (swing_step(sw, s, mid)(0) - angle) >= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return static_cast<double>(k) * dt + hi;
    }
    s = next;
  }
  return std::nullopt;
}

SwingState propagate(const EquivalentSwing& sw, const SwingState& init, double duration, double dt) {
  SwingState s = init;
  const long n = static_cast<long>(std::floor(duration / dt));
  for (long k = 0; k < n; ++k) s = swing_step(sw, s, dt);
  const double rest = duration - static_cast<double>(n) * dt;
  if (rest > 0.0) s = swing_step(sw, s, rest);
  return s;
}

CriticalClearing critical_clearing(const EquivalentSwing& fault, const EquivalentSwing& post,
                                   const SwingState& init, ClearingMethod via,
                                   const ClearingOptions& opts) {
  const Equilibria eq = require_equilibria(post, "post-fault system has no equilibrium");
  CriticalClearing out;

  if (via == ClearingMethod::Eac) {
    const double delta_b = init(0);
    auto stable = [&](double dc) { return eac_gfm(fault, post, delta_b, dc).stable; };
    double lo = delta_b;
    double hi = *eq.uep;
    if (!(lo < hi) || !stable(lo)) throw Error(ErrorCode::NeverStable, "unstable at fault inception");
    if (stable(hi)) throw Error(ErrorCode::AlwaysStable, "stable up to the post-fault UEP");
    while (hi - lo > opts.angle_tol) {
      const double mid = 0.5 * (lo + hi);
      (stable(mid) ? lo : hi) = mid;
    }
    out.angle = lo;
    const auto t = time_to_angle(fault, init, out.angle, opts.dt, opts.t_max);
    if (!t) throw Error(ErrorCode::AlwaysStable, "fault never reaches the critical angle");
    out.time = *t;
    return out;
  }

  // Simulation bisection on the clearing time. The fault-on part is
  // integrated incrementally from the last stable bracket.
  auto stable_from = [&](const SwingState& cleared) { return !slips(post, eq, cleared, opts); };
  if (!stable_from(init)) throw Error(ErrorCode::NeverStable, "unstable when cleared at once");
  const SwingState at_max = propagate(fault, init, opts.t_max, opts.dt);
  if (stable_from(at_max)) throw Error(ErrorCode::AlwaysStable, "stable for every clearing time");
  double lo = 0.0;
  double hi = opts.t_max;
  while (hi - lo > opts.time_tol) {
    const double mid = 0.5 * (lo + hi);
    (stable_from(propagate(fault, init, mid, opts.dt)) ? lo : hi) = mid;
  }
  out.time = lo;
  out.angle = propagate(fault, init, lo, opts.dt)(0);
  return out;
}

std::string_view to_string(EnergyKind kind) {
  return kind == EnergyKind::Classic ? "classic" : "modified";
}

EnergyFunction EnergyFunction::from_swing(const EquivalentSwing& sw, EnergyKind kind, bool shifted) {
  const Equilibria eq = require_equilibria(sw, "swing has no equilibrium");
  EnergyFunction f;
  f.kind = kind;
  f.j = sw.j_eq;
  f.d = sw.damping_at(*eq.sep);
  f.p_0 = sw.p0_eq;
  f.pem = sw.pem_eq;
  f.sep = *eq.sep;
  f.shifted = shifted;
  f.e_0 = f.p_0 * f.sep + f.pem * std::cos(f.sep);
  return f;
}

double vdot_modified(const EnergyFunction& f, const SwingState& s) {
  return -(f.d / f.j) *
         std::abs(f.coupling_angle(s(0)) * (f.p_0 - f.d * s(1) - f.pem * std::sin(s(0))));
}

double vdot_classic(const EnergyFunction& f, const SwingState& s) { return -f.d * s(1) * s(1); }

double vdot_numeric(const EnergyFunction& f, const SwingState& s, double h) {
  const Vec2d v = frozen_field(f, s);
  const double up = energy(f, Vec2d(s + h * v));
  const double down = energy(f, Vec2d(s - h * v));
  return (up - down) / (2.0 * h);
}

VdotComparison compare_vdot(const EnergyFunction& f, const EquivalentSwing& sw,
                            const SwingState& init, double duration, double dt) {
  constexpr double kSignFloor = 1e-9;
  VdotComparison out;
  out.max_numeric = -std::numeric_limits<double>::infinity();
  SwingState s = init;
  const long n = std::lround(duration / dt);
  for (long k = 0; k < n; ++k) {
    const SwingState next = swing_step(sw, s, dt);
    const double numeric = (energy(f, next) - energy(f, s)) / dt;
    const SwingState mid = swing_step(sw, s, 0.5 * dt);
    const double printed = vdot_modified(f, mid);
    out.max_abs_difference = std::max(out.max_abs_difference, std::abs(numeric - printed));
    out.max_numeric = std::max(out.max_numeric, numeric);
    if ((numeric > kSignFloor && printed < -kSignFloor) ||
        (numeric < -kSignFloor && printed > kSignFloor) ||
        (numeric > kSignFloor && printed == 0.0)) {
      ++out.sign_mismatches;
    }
    ++out.samples;
    s = next;
  }
  return out;
}

RoaEstimate estimate_roa(const EnergyFunction& f, const Equilibria& eq, const RoaOptions& opts) {
  if (!eq.exist()) throw Error(ErrorCode::NoEquilibrium, "estimate_roa needs sep and uep");
  if (opts.resolution < 3) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 3");
  if (!(f.j > 0.0)) throw Error(ErrorCode::NonPositiveInertia, "energy function needs j > 0");

  // Lower of the two saddles bounding the SEP well.
  const double sep = *eq.sep;
  const double right_saddle = *eq.uep;
  const double left_saddle = *eq.uep - 2.0 * kPi;
  const bool use_right = f.p_0 >= 0.0;
  const double saddle = use_right ? right_saddle : left_saddle;

  RoaEstimate roa;
  roa.kind = f.kind;
  roa.c = energy(f, Vec2d(saddle, 0.0));
  if (!(roa.c > 0.0)) throw Error(ErrorCode::DegenerateLevelSet, "level c is not above the SEP");

  const int n = opts.resolution;
  const double d_lo = use_right ? sep - 2.0 * kPi : left_saddle;
  const double d_hi = use_right ? right_saddle : sep + 2.0 * kPi;
  const double w_max = 1.05 * std::sqrt(2.0 * roa.c / f.j);
  Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(n, d_lo, d_hi);
  Eigen::VectorXd ys = Eigen::VectorXd::LinSpaced(n, -w_max, w_max);
  // The saddle column must sit exactly on the saddle.
  (use_right ? xs(n - 1) : xs(0)) = saddle;

  auto level = [&](double d, double w) { return energy(f, Vec2d(d, w)) - roa.c; };
  Eigen::ArrayXXd field(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) field(i, k) = level(xs(i), ys(k));
  }

  const std::vector<LevelLoop> loops = extract_level_loops(field, xs, ys, level);
  const Vec2d sep_point(sep, 0.0);
  const LevelLoop* best = nullptr;
  double best_area = 0.0;
  for (const LevelLoop& loop : loops) {
    if (!point_in_polygon(loop.vertices, sep_point)) continue;
    const double a = polygon_area(loop.vertices);
    if (!best || a > best_area) {
      best = &loop;
      best_area = a;
    }
  }
  if (!best || best->clipped) {
    throw Error(ErrorCode::DegenerateLevelSet, "no closed level curve around the SEP");
  }
  roa.boundary = best->vertices;
  roa.area = best_area;

  // Grid area of the SEP's sublevel component with V̇ > 0 nodes removed.
  auto vdot_ok = [&](int i, int k) {
    const Vec2d s(xs(i), ys(k));
    const double v = opts.vdot == VdotSource::Printed ? vdot_modified(f, s) : vdot_numeric(f, s);
    return v <= 0.0;
  };
  const int i0 = static_cast<int>(std::lround((sep - d_lo) / (d_hi - d_lo) * (n - 1)));
  const int k0 = (n - 1) / 2;
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  std::deque<std::pair<int, int>> queue;
  std::size_t count = 0;
  if (field(i0, k0) < 0.0 && vdot_ok(i0, k0)) {
    queue.emplace_back(i0, k0);
    seen[static_cast<std::size_t>(i0) * n + k0] = 1;
  }
  while (!queue.empty()) {
    const auto [i, k] = queue.front();
    queue.pop_front();
    ++count;
    constexpr int di[4] = {1, -1, 0, 0};
    constexpr int dk[4] = {0, 0, 1, -1};
    for (int m = 0; m < 4; ++m) {
      const int a = i + di[m];
      const int b = k + dk[m];
      if (a < 0 || b < 0 || a >= n || b >= n) continue;
      char& flag = seen[static_cast<std::size_t>(a) * n + b];
      if (flag || !(field(a, b) < 0.0) || !vdot_ok(a, b)) continue;
      flag = 1;
      queue.emplace_back(a, b);
    }
  }
  const double cell = (d_hi - d_lo) / (n - 1) * (2.0 * w_max) / (n - 1);
  roa.area_vdot = static_cast<double>(count) * cell;
  return roa;
}

bool point_in_polygon(const std::vector<Vec2d>& poly, const Vec2d& p) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
    const Vec2d& u = poly[a];
    const Vec2d& v = poly[b];
    if ((u(1) > p(1)) != (v(1) > p(1)) &&
        p(0) < (v(0) - u(0)) * (p(1) - u(1)) / (v(1) - u(1)) + u(0)) {
      in = !in;
    }
  }
  return in;
}

double polygon_area(const std::vector<Vec2d>& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t a = 0; a < n; ++a) {
    const Vec2d& u = poly[a];
    const Vec2d& v = poly[(a + 1) % n];
    twice += u(0) * v(1) - v(0) * u(1);
  }
  return 0.5 * std::abs(twice);
}

std::vector<SwingState> sample_interior(const RoaEstimate& roa, const EnergyFunction& f,
                                        std::size_t count, std::uint64_t seed) {
  if (roa.boundary.size() < 3) throw Error(ErrorCode::InvalidArgument, "empty ROA boundary");
  Vec2d lo = roa.boundary.front();
  Vec2d hi = lo;
  for (const Vec2d& p : roa.boundary) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(lo(0), hi(0));
  std::uniform_real_distribution<double> uw(lo(1), hi(1));
  std::vector<SwingState> out;
  out.reserve(count);
  while (out.size() < count) {
    const SwingState s(ud(rng), uw(rng));
    if (energy(f, s) < roa.c && point_in_polygon(roa.boundary, s)) out.push_back(s);
  }
  return out;
}

}  // namespace syncarena
