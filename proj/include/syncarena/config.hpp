#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "syncarena/scenario.hpp"

namespace syncarena {

/// Shortest text that parses back to the same double; nan/inf/-inf otherwise.
std::string format_double(double value);
/// Throws ConfigError unless the whole of `text` is a number.
double parse_double(std::string_view text);

/// Reads the line-oriented scenario format:
///
///   preset = table2          (optional, seeds every value below)
///   fault = 0
///   [grid]
///   x_g = 0.45
///   [solver]
///   variant = pll-original
///   [events]
///   t=2 set grid.v_g=0.2 fault=1
///
/// Sections base, grid, gfl, gfm take the field names of the parameter
/// structs; [solver] takes dt, t_end, record_every, variant, init (sep or
/// explicit), delta0, delta_dot0. A present [events] section replaces the
/// preset timeline. `#` starts a comment. Throws ConfigError with the line.
ScenarioSpec parse_config(std::istream& in, const std::string& origin = "<config>");
ScenarioSpec load_config(const std::filesystem::path& path);

/// Writes every value explicitly, so parse_config(write_config(s)) == s bit for bit.
std::string write_config(const ScenarioSpec& spec);

}  // namespace syncarena
