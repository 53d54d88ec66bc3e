#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "syncarena/types.hpp"

namespace syncarena {

/// Everything a controller variant reads. Timed events overwrite fields of
/// this bundle by key.
struct PlantParams {
  PerUnitBase base;
  GridParams grid;
  CurrentSetpoint current;
  GflParams gfl;
  GfmParams gfm;
  // Set by fault events; consulted by pll-frozen and pll-compensating.
  bool fault = false;
};

/// A single `section.field = value` assignment.
struct ParamSet {
  std::string key;
  double value = 0.0;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

/// Keys are `section.field` with sections base, grid, gfl, gfm (the current
/// setpoint lives under gfl: gfl.i_d, gfl.i_q, gfl.i_rated) plus the bare key
/// `fault`. Boolean fields take 0/1. Unknown keys throw ConfigError.
void set_param(PlantParams& plant, std::string_view key, double value);
double get_param(const PlantParams& plant, std::string_view key);
const std::vector<std::string>& param_keys();

void apply_sets(PlantParams& plant, const std::vector<ParamSet>& sets);

}  // namespace syncarena
