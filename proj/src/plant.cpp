#include "syncarena/plant.hpp"

#include <array>

#include "syncarena/errors.hpp"

namespace syncarena {
namespace {

struct Field {
  std::string_view key;
  double* (*ref)(PlantParams&);
};

#define SYNCARENA_FIELD(name, expr) \
  Field { name, [](PlantParams& p) -> double* { return &(expr); } }

const std::array kFields = {
    SYNCARENA_FIELD("base.s_n", p.base.s_n),
    SYNCARENA_FIELD("base.v_n_peak", p.base.v_n_peak),
    SYNCARENA_FIELD("base.omega_0", p.base.omega_0),
    SYNCARENA_FIELD("base.i_n", p.base.i_n),
    SYNCARENA_FIELD("grid.r_g", p.grid.r_g),
    SYNCARENA_FIELD("grid.x_g", p.grid.x_g),
    SYNCARENA_FIELD("grid.v_g", p.grid.v_g),
    SYNCARENA_FIELD("grid.x_t", p.grid.x_t),
    SYNCARENA_FIELD("grid.x_f", p.grid.x_f),
    SYNCARENA_FIELD("grid.v_pcc", p.grid.v_pcc),
    SYNCARENA_FIELD("grid.omega_0", p.grid.omega_0),
    SYNCARENA_FIELD("gfl.k_p", p.gfl.k_p),
    SYNCARENA_FIELD("gfl.k_i", p.gfl.k_i),
    SYNCARENA_FIELD("gfl.k_vq", p.gfl.k_vq),
    SYNCARENA_FIELD("gfl.gain_base", p.gfl.gain_base),
    SYNCARENA_FIELD("gfl.i_d", p.current.i_d),
    SYNCARENA_FIELD("gfl.i_q", p.current.i_q),
    SYNCARENA_FIELD("gfl.i_rated", p.current.i_rated),
    SYNCARENA_FIELD("gfm.j", p.gfm.j),
    SYNCARENA_FIELD("gfm.d", p.gfm.d),
    SYNCARENA_FIELD("gfm.p_0", p.gfm.p_0),
    SYNCARENA_FIELD("gfm.j_0", p.gfm.j_0),
    SYNCARENA_FIELD("gfm.n", p.gfm.n),
    SYNCARENA_FIELD("gfm.k_omega", p.gfm.k_omega),
    SYNCARENA_FIELD("gfm.k_lin", p.gfm.k_lin),
    SYNCARENA_FIELD("gfm.power_base", p.gfm.power_base),
    SYNCARENA_FIELD("gfm.pem_factor", p.gfm.pem_factor),
};

#undef SYNCARENA_FIELD

const Field* find_field(std::string_view key) {
  for (const auto& f : kFields) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

bool to_bool(std::string_view key, double value) {
  if (value != 0.0 && value != 1.0) {
    throw Error(ErrorCode::ConfigError, std::string(key) + " expects 0 or 1");
  }
  return value == 1.0;
}

}  // namespace

void set_param(PlantParams& plant, std::string_view key, double value) {
  if (key == "fault") {
    plant.fault = to_bool(key, value);
  } else if (key == "gfl.resolve_loop") {
    plant.gfl.resolve_loop = to_bool(key, value);
  } else if (const Field* f = find_field(key)) {
    *f->ref(plant) = value;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown parameter key '" + std::string(key) + "'");
  }
}

double get_param(const PlantParams& plant, std::string_view key) {
  if (key == "fault") return plant.fault ? 1.0 : 0.0;
  if (key == "gfl.resolve_loop") return plant.gfl.resolve_loop ? 1.0 : 0.0;
  if (const Field* f = find_field(key)) {
    // ref() only hands out a pointer; the bundle is not modified.
    return *f->ref(const_cast<PlantParams&>(plant));
  }
  throw Error(ErrorCode::ConfigError, "unknown parameter key '" + std::string(key) + "'");
}

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : kFields) k.emplace_back(f.key);
    k.emplace_back("gfl.resolve_loop");
    k.emplace_back("fault");
    return k;
  }();
  return keys;
}

void apply_sets(PlantParams& plant, const std::vector<ParamSet>& sets) {
  for (const auto& s : sets) set_param(plant, s.key, s.value);
}

}  // namespace syncarena
