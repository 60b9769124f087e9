#include "grekit/cli.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "grekit/config.hpp"
#include "grekit/csv_io.hpp"
#include "grekit/fuzz.hpp"

namespace grekit::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

std::optional<json> load_config(const RunManifest& m) {
  if (!m.config_path) return std::nullopt;
  return load_json(*m.config_path);
}

fs::path resolve(const RunManifest& m, const std::string& rel) {
  const fs::path p(rel);
  if (p.is_absolute() || !m.config_path) return p;
  return m.config_path->parent_path() / p;
}

Measure measure_or_unit(const RunManifest& m, const json& j, const char* key, Index n) {
  if (!j.contains(key)) return Measure::uniform(n);
  return Measure(read_vector_csv(resolve(m, j.at(key).get<std::string>())));
}

GridFunction vector_from(const RunManifest& m, const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing \"") + key + "\"");
  return GridFunction(read_vector_csv(resolve(m, j.at(key).get<std::string>())));
}

ConvexEta eta_from(const json& j, const ConvexEta& fallback) {
  return j.contains("eta") ? eta_from_json(j["eta"]) : fallback;
}

json dump_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json dump_vector(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void write_counterexample(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

/// Explicit single check from matrix/vector CSV files named in a config.
struct ExplicitCase {
  PositiveOperator op;
  GridFunction f;
  GridFunction g;
  ConvexEta eta;
  double tolerance;
};

ExplicitCase explicit_case(const RunManifest& m, const json& j) {
  try {
    auto matrix = read_matrix_csv(resolve(m, j.at("matrix").get<std::string>()));
    auto mu1 = measure_or_unit(m, j, "domain_measure", matrix.cols());
    auto mu2 = measure_or_unit(m, j, "codomain_measure", matrix.rows());
    return {PositiveOperator(std::move(matrix), std::move(mu1), std::move(mu2)),
            vector_from(m, j, "f"), vector_from(m, j, "g"), eta_from(j, ConvexEta::kl()),
            j.value("tolerance", kInequalityTolerance)};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

int lr_explicit(const RunManifest& m, const json& j, std::ostream& out) {
  const auto c = explicit_case(m, j);
  const auto report = verify_lr(c.op, c.eta, c.f, c.g, c.tolerance);
  write_csv(m.output_dir / "verify_lr_margins.csv", report);
  out << "verify-lr: rows=" << c.op.rows() << " min_margin=" << format_double(report.min_margin)
      << " argmin=" << report.argmin_index << " status=" << (report.passed ? "PASS" : "FAIL") << "\n";
  return report.passed ? kPass : kViolation;
}

int csiszar_explicit(const RunManifest& m, const json& j, std::ostream& out) {
  const auto c = explicit_case(m, j);
  const auto report = verify_csiszar(c.op, c.eta, c.f, c.g, c.tolerance);
  write_csv(m.output_dir / "verify_csiszar_margins.csv", report);
  out << "verify-csiszar: operator=" << to_string(c.op.stochasticity())
      << " margin=" << format_double(report.margins.front())
      << " status=" << (report.passed ? "PASS" : "FAIL") << "\n";
  return report.passed ? kPass : kViolation;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "verify-lr") return Command::VerifyLr;
  if (name == "verify-csiszar") return Command::VerifyCsiszar;
  if (name == "power-iterate") return Command::PowerIterate;
  if (name == "simulate-growth") return Command::SimulateGrowth;
  if (name == "simulate-transport") return Command::SimulateTransport;
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::VerifyLr:
      return "verify-lr";
    case Command::VerifyCsiszar:
      return "verify-csiszar";
    case Command::PowerIterate:
      return "power-iterate";
    case Command::SimulateGrowth:
      return "simulate-growth";
    case Command::SimulateTransport:
      return "simulate-transport";
  }
  return "?";
}

int cmd_verify_lr(const RunManifest& m, std::ostream& out, std::ostream& err) {
  if (auto j = load_config(m); j && j->contains("matrix")) return lr_explicit(m, *j, out);
  if (m.trials < 1) throw ConfigError("--trials must be >= 1");

  auto csv = open_csv(m.output_dir / "verify_lr.csv");
  csv << "trial,rows,cols,eta,min_margin,argmin_index,passed\n";
  std::size_t failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.trials; ++k) {
    const auto t = make_lr_trial(m.seed, k);
    const PositiveOperator op(t.matrix, Measure::uniform(t.matrix.cols()),
                              Measure::uniform(t.matrix.rows()));
    const auto r = verify_lr(op, t.eta, t.f, t.g, kInequalityTolerance);
    worst = std::min(worst, r.min_margin);
    csv << k << "," << op.rows() << "," << op.cols() << "," << t.eta.name() << ","
        << format_double(r.min_margin) << "," << r.argmin_index << "," << (r.passed ? 1 : 0) << "\n";
    if (!r.passed) {
      ++failures;
      json ce = {{"trial", k},
                 {"seed", m.seed},
                 {"matrix", dump_matrix(t.matrix)},
                 {"f", dump_vector(t.f.values())},
                 {"g", dump_vector(t.g.values())},
                 {"margins", r.margins}};
      to_json(ce["eta"], t.eta);
      const auto path = m.output_dir / ("counterexample_lr_" + std::to_string(k) + ".json");
      write_counterexample(path, ce);
      err << "verify-lr: trial " << k << " violates the inequality, see " << path.string() << "\n";
    }
  }
  out << "verify-lr: trials=" << m.trials << " failures=" << failures
      << " min_scaled_margin=" << format_double(worst)
      << " status=" << (failures ? "FAIL" : "PASS") << "\n";
  return failures ? kViolation : kPass;
}

int cmd_verify_csiszar(const RunManifest& m, std::ostream& out, std::ostream& err) {
  if (auto j = load_config(m); j && j->contains("matrix")) return csiszar_explicit(m, *j, out);
  if (m.trials < 1) throw ConfigError("--trials must be >= 1");

  auto csv = open_csv(m.output_dir / "verify_csiszar.csv");
  csv << "trial,mode,eta,h_before,h_after,margin,passed\n";
  std::size_t failures = 0;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < m.trials; ++k) {
    const auto t = make_csiszar_trial(m.seed, k, true);
    if (!t.op) {
      ++skipped;
      err << "verify-csiszar: trial " << k << " skipped: " << t.skip_reason << "\n";
      csv << k << ",skipped," << t.eta.name() << ",nan,nan,nan,1\n";
      continue;
    }
    const auto& op = *t.op;
    const auto before = relative_entropy(t.eta, t.f, t.g, op.domain_measure());
    const auto after = relative_entropy(t.eta, apply(op, t.f), apply(op, t.g), op.codomain_measure());
    const auto r = verify_csiszar(op, t.eta, t.f, t.g, kInequalityTolerance);
    csv << k << "," << to_string(op.stochasticity()) << "," << t.eta.name() << ","
        << format_double(before.to_double()) << "," << format_double(after.to_double()) << ","
        << format_double(r.margins.front()) << "," << (r.passed ? 1 : 0) << "\n";
    if (!r.passed) {
      ++failures;
      json ce = {{"trial", k},
                 {"seed", m.seed},
                 {"matrix", dump_matrix(op.matrix())},
                 {"domain_measure", dump_vector(op.domain_measure().weights())},
                 {"codomain_measure", dump_vector(op.codomain_measure().weights())},
                 {"f", dump_vector(t.f.values())},
                 {"g", dump_vector(t.g.values())},
                 {"margin", r.margins.front()}};
      to_json(ce["eta"], t.eta);
      const auto path = m.output_dir / ("counterexample_csiszar_" + std::to_string(k) + ".json");
      write_counterexample(path, ce);
      err << "verify-csiszar: trial " << k << " violates the inequality, see " << path.string() << "\n";
    }
  }
  out << "verify-csiszar: trials=" << m.trials << " skipped=" << skipped << " failures=" << failures
      << " status=" << (failures ? "FAIL" : "PASS") << "\n";
  return failures ? kViolation : kPass;
}

int cmd_power_iterate(const RunManifest& m, std::ostream& out, std::ostream&) {
  const auto cfg = load_config(m);
  std::optional<PositiveOperator> op;
  std::optional<GridFunction> f0;
  std::optional<GridFunction> g0;
  ConvexEta eta = ConvexEta::kl();
  std::size_t steps = 100;
  if (cfg && cfg->contains("matrix")) {
    const auto& j = *cfg;
    auto matrix = read_matrix_csv(resolve(m, j.at("matrix").get<std::string>()));
    auto mu = measure_or_unit(m, j, "measure", matrix.cols());
    op.emplace(std::move(matrix), mu, mu);
    f0 = vector_from(m, j, "f0");
    g0 = vector_from(m, j, "g0");
    eta = eta_from(j, eta);
    steps = j.value("steps", steps);
  } else {
    CounterRng rng(m.seed, 0);
    constexpr Index n = 5;
    op.emplace(random_column_stochastic(rng, n), Measure::uniform(n), Measure::uniform(n));
    Eigen::VectorXd f(n);
    Eigen::VectorXd g(n);
    for (Index i = 0; i < n; ++i) f[i] = rng.uniform();
    for (Index i = 0; i < n; ++i) g[i] = rng.uniform(0.1, 1.0);
    f0.emplace(f);
    g0.emplace(g);
    if (cfg) {
      eta = eta_from(*cfg, eta);
      steps = cfg->value("steps", steps);
    }
  }
  const auto trace = power_iterate_gre(*op, eta, *f0, *g0, steps);
  write_csv(m.output_dir / "power_iterate.csv", trace);
  const double inc = trace.max_scaled_increase();
  const bool ok = inc <= kEntropySlack;
  out << "power-iterate: steps=" << steps << " eta=" << eta.name()
      << " max_entropy_increase=" << format_double(inc) << " status=" << (ok ? "PASS" : "FAIL")
      << "\n";
  return ok ? kPass : kViolation;
}

int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream&) {
  json j = json::object();
  if (auto cfg = load_config(m)) j = std::move(*cfg);
  if (m.preset) j["preset"] = *m.preset;
  std::ostringstream summary;

  bool ok = true;
  if (m.command == Command::SimulateGrowth) {
    const auto setup = growth_setup_from_json(j);
    const auto trace = run_growth(setup.config, setup.n0, setup.m0);
    write_csv(m.output_dir / "growth_trace.csv", trace);
    const double cons = trace.conservation_residual();
    const double inc = trace.max_scaled_increase();
    const double stoch = trace.max_stochasticity_residual();
    ok = cons <= kConservationTolerance && inc <= kEntropySlack && stoch <= kStochasticTolerance;
    summary << "simulate-growth: steps=" << trace.rows.size() - 1
            << " dt=" << format_double(trace.dt) << " conservation_residual=" << format_double(cons)
            << " max_entropy_increase=" << format_double(inc)
            << " min_csiszar_margin=" << format_double(trace.min_csiszar_margin())
            << " max_stochasticity_residual=" << format_double(stoch);
  } else {
    const auto setup = transport_setup_from_json(j);
    const auto trace = run_transport(setup.config, setup.f0, setup.g0);
    write_csv(m.output_dir / "transport_trace.csv", trace);
    const double mass0 = std::max(trace.rows.front().mass_f, trace.rows.front().mass_g);
    const double dm = std::max(trace.max_mass_increase_f(), trace.max_mass_increase_g());
    const double inc = trace.max_scaled_increase();
    const double lr = trace.min_lr_margin();
    ok = dm <= kMassSlack * mass0 && lr >= -kInequalityTolerance &&
         trace.update_kind != Stochasticity::GeneralPositive &&
         (!trace.entropy_monotone_expected || inc <= kEntropySlack);
    summary << "simulate-transport: steps=" << trace.rows.size() - 1
            << " dt=" << format_double(trace.dt) << " update=" << to_string(trace.update_kind)
            << " max_mass_increase=" << format_double(dm)
            << " max_entropy_increase=" << format_double(inc)
            << (trace.entropy_monotone_expected ? "" : " (not asserted: eta changes sign)")
            << " min_lr_margin=" << format_double(lr) << " min_g=" << format_double(trace.min_g());
  }
  summary << " status=" << (ok ? "PASS" : "FAIL") << "\n";
  std::ofstream(m.output_dir / "summary.txt", std::ios::binary) << summary.str();
  out << summary.str();
  return ok ? kPass : kViolation;
}

int run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(m.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + m.output_dir.string());
    switch (m.command) {
      case Command::VerifyLr:
        return cmd_verify_lr(m, out, err);
      case Command::VerifyCsiszar:
        return cmd_verify_csiszar(m, out, err);
      case Command::PowerIterate:
        return cmd_power_iterate(m, out, err);
      case Command::SimulateGrowth:
      case Command::SimulateTransport:
        return cmd_simulate(m, out, err);
    }
  } catch (const PreconditionLost& e) {
    err << command_name(m.command) << ": " << e.what() << "\n";
    return kPreconditionLost;
  } catch (const NotStochastic& e) {
    err << command_name(m.command) << ": " << e.what() << "\n";
    return m.command == Command::SimulateGrowth || m.command == Command::SimulateTransport
               ? kViolation
               : kUsage;
  } catch (const std::exception& e) {
    err << command_name(m.command) << ": " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace grekit::cli
