#include "syncarena/csv.hpp"

#include "syncarena/config.hpp"

namespace syncarena {
namespace {

// Errors may carry commas or quotes.
std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,delta,delta_dot,v_pccq,j_eff,kp_eff,energy\n";
  for (const Sample& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.delta) << ',' << format_double(s.delta_dot)
       << ',' << format_double(s.v_pccq) << ',' << format_double(s.j_eff) << ','
       << format_double(s.kp_eff) << ',' << format_double(s.energy) << '\n';
  }
}

void write_roa_csv(std::ostream& os, const RoaEstimate& roa) {
  os << "# c=" << format_double(roa.c) << " kind=" << to_string(roa.kind)
     << " area=" << format_double(roa.area) << '\n';
  os << "delta,delta_dot\n";
  for (const Vec2d& p : roa.boundary) os << format_double(p(0)) << ',' << format_double(p(1)) << '\n';
}

void write_basin_csv(std::ostream& os, const BasinMap& map) {
  os << "delta0,delta_dot0,verdict\n";
  for (int k = 0; k < map.grid.n_delta_dot; ++k) {
    for (int i = 0; i < map.grid.n_delta; ++i) {
      os << format_double(map.grid.delta(i)) << ',' << format_double(map.grid.delta_dot(k)) << ','
         << to_string(map.at(i, k)) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  for (const std::string& k : result.keys) os << k << ',';
  os << "verdict,margin,settle_time,error\n";
  for (const SweepRow& row : result.rows) {
    for (double v : row.values) os << format_double(v) << ',';
    os << row.verdict << ',' << format_double(row.margin) << ',' << format_double(row.settle_time)
       << ',' << quoted(row.error) << '\n';
  }
}

}  // namespace syncarena
