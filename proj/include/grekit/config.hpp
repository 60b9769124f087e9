#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "grekit/growth_frag.hpp"
#include "grekit/transport_slab.hpp"

namespace grekit {

/// Named coefficient profiles: "zero", "const:c", "linear" (alias "x"),
/// "power:k" (x^k), "exp:a" (exp(a x)).
Profile parse_profile(const std::string& spec);

/// Named fragmentation kernels over a total rate B: "binary" (2 B(y) / y,
/// uniform daughters) and "none".
FragKernel parse_kernel(const std::string& spec, Profile total_rate);

/// Initial data on cell centers `x` for a growth run: "uniform(c)",
/// "gaussian(x0,s)", "spike(x0)" (unit mass in the cell containing x0).
Eigen::VectorXd growth_initial_data(const std::string& spec, const Eigen::VectorXd& x);

/// Initial data on the slab grid: "uniform(c)", "gaussian(x0,s)" (isotropic),
/// "beam(x0,v_index)" (unit mass in one cell and ordinate).
Eigen::VectorXd transport_initial_data(const std::string& spec, const TransportConfig& cfg);

struct GrowthSetup {
  GrowthConfig config;
  GridFunction n0 = GridFunction::zeros(0);
  GridFunction m0 = GridFunction::zeros(0);
};

struct TransportSetup {
  TransportConfig config;
  GridFunction f0 = GridFunction::zeros(0);
  GridFunction g0 = GridFunction::zeros(0);
};

/// Config objects may name a "preset" and override any of its keys.
GrowthSetup growth_setup_from_json(const nlohmann::json& j);
TransportSetup transport_setup_from_json(const nlohmann::json& j);

/// "binary-fragmentation", "drift-only", "drift-fragmentation".
nlohmann::json growth_preset(const std::string& name);
/// "beam-isotropic", "free-streaming".
nlohmann::json transport_preset(const std::string& name);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace grekit
