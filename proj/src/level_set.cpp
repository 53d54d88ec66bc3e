#include "syncarena/level_set.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>

namespace syncarena {
namespace {

constexpr int kBisectionSteps = 80;

class PaddedGrid {
 public:
  PaddedGrid(const Eigen::ArrayXXd& field, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys)
      : field_(field), xs_(xs), ys_(ys), nx_(static_cast<int>(xs.size())),
        ny_(static_cast<int>(ys.size())) {}

  [[nodiscard]] bool real(int i, int k) const { return i >= 0 && k >= 0 && i < nx_ && k < ny_; }
  [[nodiscard]] double value(int i, int k) const { return real(i, k) ? field_(i, k) : 1.0; }
  [[nodiscard]] bool inside(int i, int k) const { return value(i, k) < 0.0; }

  [[nodiscard]] Vec2d point(int i, int k) const {
    const int ic = std::clamp(i, 0, nx_ - 1);
    const int kc = std::clamp(k, 0, ny_ - 1);
    return {xs_(ic), ys_(kc)};
  }

  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int ny() const { return ny_; }

 private:
  const Eigen::ArrayXXd& field_;
  const Eigen::VectorXd& xs_;
  const Eigen::VectorXd& ys_;
  int nx_;
  int ny_;
};

struct Edge {
  int i0, k0, i1, k1;
};

std::int64_t edge_key(const PaddedGrid& g, const Edge& e) {
  // Horizontal edges join (i, k)-(i+1, k); vertical ones (i, k)-(i, k+1).
  const int dir = e.k0 == e.k1 ? 0 : 1;
  const std::int64_t stride = g.ny() + 2;
  return ((static_cast<std::int64_t>(e.i0) + 1) * stride + (e.k0 + 1)) * 2 + dir;
}

}  // namespace

std::vector<LevelLoop> extract_level_loops(const Eigen::ArrayXXd& field, const Eigen::VectorXd& xs,
                                           const Eigen::VectorXd& ys,
                                           const std::function<double(double, double)>& f) {
  const PaddedGrid g(field, xs, ys);
  std::unordered_map<std::int64_t, Edge> edges;
  std::unordered_map<std::int64_t, std::array<std::int64_t, 2>> links;
  std::unordered_map<std::int64_t, int> degree;

  auto connect = [&](const Edge& a, const Edge& b) {
    const std::int64_t ka = edge_key(g, a);
    const std::int64_t kb = edge_key(g, b);
    edges.emplace(ka, a);
    edges.emplace(kb, b);
    links[ka][degree[ka]++] = kb;
    links[kb][degree[kb]++] = ka;
  };

  for (int i = -1; i < g.nx(); ++i) {
    for (int k = -1; k < g.ny(); ++k) {
      const std::array<bool, 4> in = {g.inside(i, k), g.inside(i + 1, k), g.inside(i + 1, k + 1),
                                      g.inside(i, k + 1)};
      const int count = in[0] + in[1] + in[2] + in[3];
      if (count == 0 || count == 4) continue;
      const Edge bottom{i, k, i + 1, k};
      const Edge right{i + 1, k, i + 1, k + 1};
      const Edge top{i, k + 1, i + 1, k + 1};
      const Edge left{i, k, i, k + 1};
      const std::array<Edge, 4> side = {bottom, right, top, left};
      // Side s joins corner s and corner s+1.
      std::array<int, 4> crossing{};
      int n = 0;
      for (int s = 0; s < 4; ++s) {
        if (in[s] != in[(s + 1) % 4]) crossing[n++] = s;
      }
      if (n == 2) {
        connect(side[crossing[0]], side[crossing[1]]);
        continue;
      }
      // Saddle: diagonal corners share a state.
      const double centre =
          0.25 * (g.value(i, k) + g.value(i + 1, k) + g.value(i + 1, k + 1) + g.value(i, k + 1));
      const bool centre_in = centre < 0.0;
      // Cut around corner 0 and 2 when they differ from the centre, else 1 and 3.
      if (in[0] != centre_in) {
        connect(left, bottom);
        connect(right, top);
      } else {
        connect(bottom, right);
        connect(top, left);
      }
    }
  }

  auto vertex = [&](const Edge& e, bool& clipped) -> Vec2d {
    if (!g.real(e.i0, e.k0) || !g.real(e.i1, e.k1)) {
      clipped = true;
      return g.real(e.i0, e.k0) ? g.point(e.i0, e.k0) : g.point(e.i1, e.k1);
    }
    Vec2d lo = g.point(e.i0, e.k0);
    Vec2d hi = g.point(e.i1, e.k1);
    if (!g.inside(e.i0, e.k0)) std::swap(lo, hi);
    // f(lo) < 0 <= f(hi) on the grid values; bisect on the exact function.
    for (int it = 0; it < kBisectionSteps; ++it) {
      const Vec2d mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (f(mid(0), mid(1)) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return std::abs(f(lo(0), lo(1))) < std::abs(f(hi(0), hi(1))) ? lo : hi;
  };

  std::vector<LevelLoop> loops;
  std::unordered_map<std::int64_t, bool> visited;
  // Deterministic traversal order: sort keys.
  std::vector<std::int64_t> keys;
  keys.reserve(edges.size());
  for (const auto& [key, _] : edges) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  for (std::int64_t start : keys) {
    if (visited[start]) continue;
    LevelLoop loop;
    std::int64_t prev = -1;
    std::int64_t cur = start;
    while (!visited[cur]) {
      visited[cur] = true;
      loop.vertices.push_back(vertex(edges.at(cur), loop.clipped));
      const auto& nb = links.at(cur);
      const std::int64_t next = nb[0] != prev ? nb[0] : nb[1];
      prev = cur;
      cur = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace syncarena
