#pragma once

#include <ostream>

#include "syncarena/basin.hpp"
#include "syncarena/integrate.hpp"
#include "syncarena/scenario.hpp"
#include "syncarena/stability.hpp"

namespace syncarena {

/// t,delta,delta_dot,v_pccq,j_eff,kp_eff,energy
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// `# c=<c> kind=<classic|modified> area=<area>` then delta,delta_dot rows.
void write_roa_csv(std::ostream& os, const RoaEstimate& roa);

/// delta0,delta_dot0,verdict in grid order.
void write_basin_csv(std::ostream& os, const BasinMap& map);

/// Axis keys, then verdict,margin,settle_time,error.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace syncarena
