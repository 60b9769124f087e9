#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "grekit/cli.hpp"
#include "grekit/csv_io.hpp"

using namespace grekit;
using namespace grekit::cli;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::path(GREKIT_TEST_TMP) / "cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const RunManifest& m) {
  std::ostringstream out, err;
  const int code = run(m, out, err);
  return {code, out.str(), err.str()};
}

RunManifest manifest(Command c, const fs::path& out, std::size_t trials = 1, std::uint64_t seed = 0) {
  RunManifest m;
  m.command = c;
  m.output_dir = out;
  m.trials = trials;
  m.seed = seed;
  return m;
}

}  // namespace

TEST_CASE("command names round trip") {
  for (auto c : {Command::VerifyLr, Command::VerifyCsiszar, Command::PowerIterate,
                 Command::SimulateGrowth, Command::SimulateTransport}) {
    CHECK(parse_command(command_name(c)) == c);
  }
  CHECK_FALSE(parse_command("verify").has_value());
}

TEST_CASE("verify-lr fuzzing passes and is deterministic") {
  const auto a = tmp_dir("lr_a"), b = tmp_dir("lr_b");
  const auto ra = run_cli(manifest(Command::VerifyLr, a, 300, 11));
  const auto rb = run_cli(manifest(Command::VerifyLr, b, 300, 11));
  CHECK(ra.code == kPass);
  CHECK(ra.out == rb.out);
  CHECK(read_text(a / "verify_lr.csv") == read_text(b / "verify_lr.csv"));
  const auto csv = read_text(a / "verify_lr.csv");
  CHECK(csv.rfind("trial,rows,cols,eta,min_margin,argmin_index,passed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 301);

  const auto c = tmp_dir("lr_c");
  run_cli(manifest(Command::VerifyLr, c, 300, 12));
  CHECK(read_text(c / "verify_lr.csv") != csv);
}

TEST_CASE("verify-csiszar fuzzing passes") {
  const auto d = tmp_dir("cs");
  const auto r = run_cli(manifest(Command::VerifyCsiszar, d, 300, 5));
  CHECK(r.code == kPass);
  CHECK(read_text(d / "verify_csiszar.csv").rfind("trial,mode,eta,h_before,h_after,margin,passed\n", 0) == 0);
}

TEST_CASE("explicit verify-lr config: identity gives zero margins") {
  const auto d = tmp_dir("lr_explicit");
  write_text(d / "m.csv", "# rows 2 cols 2\n1,0\n0,1\n");
  write_text(d / "f.csv", "# rows 1 cols 2\n0.5,0\n");
  write_text(d / "g.csv", "# rows 1 cols 2\n1,2\n");
  write_text(d / "cfg.json", R"({"matrix": "m.csv", "f": "f.csv", "g": "g.csv", "eta": {"kind": "KL"}})");
  auto m = manifest(Command::VerifyLr, d / "out");
  m.config_path = d / "cfg.json";
  const auto r = run_cli(m);
  CHECK(r.code == kPass);
  CHECK(read_text(d / "out" / "verify_lr_margins.csv") == "index,margin,scale\n0,0,1.3465735902799727\n1,0,1\n");

  // demanding a positive margin turns the equality case into a violation
  write_text(d / "strict.json", R"({"matrix": "m.csv", "f": "f.csv", "g": "g.csv", "tolerance": -0.1})");
  m.config_path = d / "strict.json";
  CHECK(run_cli(m).code == kViolation);
}

TEST_CASE("explicit verify-csiszar config") {
  const auto d = tmp_dir("cs_explicit");
  write_text(d / "m.csv", "# rows 2 cols 2\n0.7,0.3\n0.3,0.7\n");
  write_text(d / "f.csv", "# rows 2 cols 1\n1\n0\n");
  write_text(d / "g.csv", "# rows 2 cols 1\n0.5\n0.5\n");
  write_text(d / "cfg.json", R"({"matrix": "m.csv", "f": "f.csv", "g": "g.csv", "eta": {"kind": "QUAD"}})");
  auto m = manifest(Command::VerifyCsiszar, d / "out");
  m.config_path = d / "cfg.json";
  const auto r = run_cli(m);
  CHECK(r.code == kPass);
  CHECK(r.out.find("operator=STOCHASTIC") != std::string::npos);

  write_text(d / "big.csv", "# rows 2 cols 2\n2,0\n0,1\n");
  write_text(d / "bad.json", R"({"matrix": "big.csv", "f": "f.csv", "g": "g.csv"})");
  m.config_path = d / "bad.json";
  CHECK(run_cli(m).code == kUsage);
}

TEST_CASE("usage and I/O errors exit 1") {
  const auto d = tmp_dir("usage");
  auto m = manifest(Command::VerifyLr, d);
  m.config_path = d / "missing.json";
  CHECK(run_cli(m).code == kUsage);
  write_text(d / "broken.json", "{");
  m.config_path = d / "broken.json";
  CHECK(run_cli(m).code == kUsage);
  write_text(d / "nof.json", R"({"matrix": "nothere.csv"})");
  m.config_path = d / "nof.json";
  CHECK(run_cli(m).code == kUsage);
  CHECK(run_cli(manifest(Command::VerifyLr, d, 0)).code == kUsage);
  auto p = manifest(Command::SimulateGrowth, d);
  p.preset = "unknown";
  CHECK(run_cli(p).code == kUsage);
}

TEST_CASE("power-iterate") {
  const auto d = tmp_dir("power");
  const auto r = run_cli(manifest(Command::PowerIterate, d, 1, 3));
  CHECK(r.code == kPass);
  const auto csv = read_text(d / "power_iterate.csv");
  CHECK(csv.rfind("k,entropy,mass,step_margin\n0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
}

TEST_CASE("simulate presets") {
  const auto g = tmp_dir("growth");
  auto mg = manifest(Command::SimulateGrowth, g);
  mg.preset = "binary-fragmentation";
  const auto rg = run_cli(mg);
  CHECK(rg.code == kPass);
  CHECK(rg.out.find("status=PASS") != std::string::npos);
  CHECK(read_text(g / "summary.txt") == rg.out);
  CHECK(read_text(g / "growth_trace.csv").rfind("k,t,entropy,weighted_mass,csiszar_margin\n", 0) == 0);

  const auto t = tmp_dir("transport");
  auto mt = manifest(Command::SimulateTransport, t);
  mt.preset = "beam-isotropic";
  CHECK(run_cli(mt).code == kPass);
  CHECK(read_text(t / "transport_trace.csv").rfind("k,t,mass_f,mass_g,entropy,lr_min_margin\n", 0) == 0);
}

TEST_CASE("lost preconditions exit 3") {
  const auto d = tmp_dir("precond");
  write_text(d / "cfl.json", R"({"preset": "beam-isotropic", "cfl_safety": 1.0})");
  auto m = manifest(Command::SimulateTransport, d / "out");
  m.config_path = d / "cfl.json";
  auto r = run_cli(m);
  CHECK(r.code == kPreconditionLost);
  CHECK(r.err.find("step") != std::string::npos);

  write_text(d / "dual.json", R"({"preset": "drift-only", "dual_mode": "forward"})");
  m.command = Command::SimulateGrowth;
  m.config_path = d / "dual.json";
  r = run_cli(m);
  CHECK(r.code == kPreconditionLost);
}
