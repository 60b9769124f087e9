#include "grekit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "grekit/errors.hpp"

namespace grekit {

namespace {

using nlohmann::json;

double to_number(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(context + ": bad number \"" + s + "\"");
  return v;
}

/// Splits "name(a,b)" into name and numeric arguments.
std::pair<std::string, std::vector<double>> split_call(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return {spec, {}};
  if (spec.back() != ')') throw ConfigError("malformed preset \"" + spec + "\"");
  std::vector<double> args;
  std::istringstream in(spec.substr(open + 1, spec.size() - open - 2));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    args.push_back(to_number(tok, spec));
  }
  return {spec.substr(0, open), args};
}

void expect_args(const std::string& spec, const std::vector<double>& args, std::size_t n) {
  if (args.size() != n) {
    throw ConfigError("\"" + spec + "\" expects " + std::to_string(n) + " argument(s)");
  }
}

// The right end of the domain belongs to the last cell.
Index cell_of(double x0, double h, Index n) {
  const double top = h * static_cast<double>(n);
  if (!(x0 >= 0.0 && x0 <= top * (1.0 + 1e-12))) {
    throw ConfigError("initial data: position " + std::to_string(x0) + " outside [0, " +
                      std::to_string(top) + "]");
  }
  auto i = static_cast<Index>(std::floor(x0 / h));
  return std::clamp<Index>(i, 0, n - 1);
}

void merge(json& base, const json& overrides) {
  for (const auto& [key, value] : overrides.items()) {
    if (key != "preset") base[key] = value;
  }
}

template <class T>
T get(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key \"") + key + "\": " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(std::string(what) + ": unknown key \"" + key + "\"");
  }
}

}  // namespace

Profile parse_profile(const std::string& spec) {
  if (spec == "zero") return [](double) { return 0.0; };
  if (spec == "linear" || spec == "x") return [](double x) { return x; };
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const auto head = spec.substr(0, colon);
    const double a = to_number(spec.substr(colon + 1), spec);
    if (head == "const") return [a](double) { return a; };
    if (head == "power") return [a](double x) { return std::pow(x, a); };
    if (head == "exp") return [a](double x) { return std::exp(a * x); };
  }
  throw ConfigError("unknown profile \"" + spec + "\"");
}

FragKernel parse_kernel(const std::string& spec, Profile total_rate) {
  if (spec == "binary") {
    return [B = std::move(total_rate)](double y, double) { return 2.0 * B(y) / y; };
  }
  if (spec == "none") return [](double, double) { return 0.0; };
  throw ConfigError("unknown fragmentation kernel \"" + spec + "\"");
}

Eigen::VectorXd growth_initial_data(const std::string& spec, const Eigen::VectorXd& x) {
  const auto [name, args] = split_call(spec);
  const Index n = x.size();
  const double h = n > 1 ? x[1] - x[0] : 2.0 * x[0];
  if (name == "uniform") {
    expect_args(spec, args, 1);
    return Eigen::VectorXd::Constant(n, args[0]);
  }
  if (name == "gaussian") {
    expect_args(spec, args, 2);
    return (-((x.array() - args[0]) / args[1]).square()).exp().matrix();
  }
  if (name == "spike") {
    expect_args(spec, args, 1);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[cell_of(args[0], h, n)] = 1.0 / h;
    return v;
  }
  throw ConfigError("unknown initial data \"" + spec + "\"");
}

Eigen::VectorXd transport_initial_data(const std::string& spec, const TransportConfig& cfg) {
  const auto [name, args] = split_call(spec);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(cfg.size());
  if (name == "uniform") {
    expect_args(spec, args, 1);
    v.setConstant(args[0]);
    return v;
  }
  if (name == "gaussian") {
    expect_args(spec, args, 2);
    const auto x = cfg.cell_centers();
    for (Index i = 0; i < cfg.n_x; ++i) {
      const double val = std::exp(-std::pow((x[i] - args[0]) / args[1], 2));
      for (Index m = 0; m < cfg.n_v; ++m) v[cfg.index(i, m)] = val;
    }
    return v;
  }
  if (name == "beam") {
    expect_args(spec, args, 2);
    const auto m = static_cast<Index>(args[1]);
    if (args[1] != static_cast<double>(m) || m < 0 || m >= cfg.n_v) {
      throw ConfigError("beam: v_index out of range in \"" + spec + "\"");
    }
    v[cfg.index(cell_of(args[0], cfg.dx(), cfg.n_x), m)] = 1.0 / (cfg.dx() * cfg.dv());
    return v;
  }
  throw ConfigError("unknown initial data \"" + spec + "\"");
}

json growth_preset(const std::string& name) {
  if (name == "binary-fragmentation") {
    return {{"x_max", 1.0},         {"n_cells", 200},        {"velocity", "zero"},
            {"death_rate", "zero"}, {"total_frag_rate", "linear"}, {"frag_kernel", "binary"},
            {"dt_safety", 0.9},     {"t_end", 100.0},       {"eta", {{"kind", "QUAD"}}},
            {"psi0", "linear"},     {"dual_mode", "terminal"}, {"n0", "spike(1.0)"},
            {"m0", "uniform(1)"}};
  }
  if (name == "drift-only") {
    return {{"x_max", 1.0},          {"n_cells", 100},       {"velocity", "const:1"},
            {"death_rate", "zero"},  {"total_frag_rate", "zero"}, {"frag_kernel", "none"},
            {"dt_safety", 0.9},      {"t_end", 1.0},         {"eta", {{"kind", "QUAD"}}},
            {"psi0", "const:1"},     {"dual_mode", "terminal"}, {"n0", "gaussian(0.3,0.1)"},
            {"m0", "uniform(1)"}};
  }
  if (name == "drift-fragmentation") {
    return {{"x_max", 1.0},          {"n_cells", 100},       {"velocity", "const:1"},
            {"death_rate", "zero"},  {"total_frag_rate", "linear"}, {"frag_kernel", "binary"},
            {"dt_safety", 0.9},      {"t_end", 0.5},         {"eta", {{"kind", "KL"}}},
            {"psi0", "const:1"},     {"dual_mode", "terminal"}, {"n0", "gaussian(0.3,0.1)"},
            {"m0", "uniform(1)"}};
  }
  throw ConfigError("unknown growth preset \"" + name + "\"");
}

json transport_preset(const std::string& name) {
  if (name == "beam-isotropic") {
    return {{"length", 1.0},       {"n_x", 100},         {"v_max", 1.0},
            {"n_v", 8},            {"sigma", 1.0},       {"scattering", "ISOTROPIC"},
            {"cfl_safety", 0.9},   {"t_end", 1.0},       {"eta", {{"kind", "QUAD"}}},
            {"f0", "beam(0.5,7)"}, {"g0", "uniform(1)"}};
  }
  if (name == "free-streaming") {
    return {{"length", 1.0},       {"n_x", 100},           {"v_max", 1.0},
            {"n_v", 8},            {"sigma", 0.0},         {"scattering", "NONE"},
            {"cfl_safety", 0.9},   {"t_end", 1.0},         {"eta", {{"kind", "QUAD"}}},
            {"f0", "uniform(2)"},  {"g0", "uniform(1)"}};
  }
  throw ConfigError("unknown transport preset \"" + name + "\"");
}

GrowthSetup growth_setup_from_json(const json& in) {
  if (!in.is_object()) throw ConfigError("growth config must be a JSON object");
  json j = in.contains("preset") ? growth_preset(get<std::string>(in, "preset", "")) : json::object();
  merge(j, in);
  // Short aliases for the coefficient functions.
  for (const auto& [alias, key] : {std::pair{"v", "velocity"}, {"w", "death_rate"},
                                   {"B", "total_frag_rate"}, {"b", "frag_kernel"}}) {
    if (j.contains(alias)) {
      j[key] = j[alias];
      j.erase(alias);
    }
  }
  reject_unknown(j,
                 {"x_max", "n_cells", "velocity", "death_rate", "total_frag_rate", "frag_kernel",
                  "dt_safety", "t_end", "eta", "psi0", "dual_mode", "n0", "m0"},
                 "growth config");

  GrowthSetup s;
  auto& c = s.config;
  c.x_max = get(j, "x_max", c.x_max);
  c.n_cells = get<Index>(j, "n_cells", c.n_cells);
  c.velocity = parse_profile(get<std::string>(j, "velocity", "zero"));
  c.death_rate = parse_profile(get<std::string>(j, "death_rate", "zero"));
  c.total_frag_rate = parse_profile(get<std::string>(j, "total_frag_rate", "zero"));
  c.frag_kernel = parse_kernel(get<std::string>(j, "frag_kernel", "none"), c.total_frag_rate);
  c.dt_safety = get(j, "dt_safety", c.dt_safety);
  c.t_end = get(j, "t_end", c.t_end);
  if (j.contains("eta")) c.eta = eta_from_json(j["eta"]);
  c.psi0 = parse_profile(get<std::string>(j, "psi0", "const:1"));
  const auto mode = get<std::string>(j, "dual_mode", "forward");
  if (mode == "forward") {
    c.dual_mode = DualMode::Forward;
  } else if (mode == "terminal") {
    c.dual_mode = DualMode::Terminal;
  } else {
    throw ConfigError("dual_mode must be \"forward\" or \"terminal\"");
  }
  if (c.n_cells < 1) throw ConfigError("n_cells must be >= 1");
  const auto x = c.centers();
  try {
    s.n0 = GridFunction(growth_initial_data(get<std::string>(j, "n0", "uniform(1)"), x));
    s.m0 = GridFunction(growth_initial_data(get<std::string>(j, "m0", "uniform(1)"), x));
  } catch (const NegativeInput& e) {
    throw ConfigError(std::string("growth initial data: ") + e.what());
  }
  return s;
}

TransportSetup transport_setup_from_json(const json& in) {
  if (!in.is_object()) throw ConfigError("transport config must be a JSON object");
  json j =
      in.contains("preset") ? transport_preset(get<std::string>(in, "preset", "")) : json::object();
  merge(j, in);
  if (j.contains("L")) {
    j["length"] = j["L"];
    j.erase("L");
  }
  reject_unknown(j,
                 {"length", "n_x", "v_max", "n_v", "sigma", "scattering", "cfl_safety", "t_end",
                  "eta", "f0", "g0"},
                 "transport config");

  TransportSetup s;
  auto& c = s.config;
  c.length = get(j, "length", c.length);
  c.n_x = get<Index>(j, "n_x", c.n_x);
  c.v_max = get(j, "v_max", c.v_max);
  c.n_v = get<Index>(j, "n_v", c.n_v);
  c.sigma = get(j, "sigma", c.sigma);
  const auto scat = get<std::string>(j, "scattering", "ISOTROPIC");
  if (scat == "ISOTROPIC") {
    c.scattering = Scattering::Isotropic;
  } else if (scat == "NONE") {
    c.scattering = Scattering::None;
  } else {
    throw ConfigError("scattering must be \"ISOTROPIC\" or \"NONE\"");
  }
  c.cfl_safety = get(j, "cfl_safety", c.cfl_safety);
  c.t_end = get(j, "t_end", c.t_end);
  if (j.contains("eta")) c.eta = eta_from_json(j["eta"]);
  if (c.n_x < 1 || c.n_v < 2 || c.n_v % 2 != 0) {
    throw ConfigError("n_x must be >= 1 and n_v even and >= 2");
  }
  try {
    s.f0 = GridFunction(transport_initial_data(get<std::string>(j, "f0", "uniform(1)"), c));
    s.g0 = GridFunction(transport_initial_data(get<std::string>(j, "g0", "uniform(1)"), c));
  } catch (const NegativeInput& e) {
    throw ConfigError(std::string("transport initial data: ") + e.what());
  }
  return s;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace grekit
