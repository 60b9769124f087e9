#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace grekit::cli {

enum class Command { VerifyLr, VerifyCsiszar, PowerIterate, SimulateGrowth, SimulateTransport };

std::optional<Command> parse_command(const std::string& name);
const char* command_name(Command c);

/// Everything that determines the output of a run.
struct RunManifest {
  Command command = Command::VerifyLr;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> preset;
  std::filesystem::path output_dir = ".";
  std::size_t trials = 1;
};

enum ExitCode : int { kPass = 0, kUsage = 1, kViolation = 2, kPreconditionLost = 3 };

/// Tolerances applied by the commands.
inline constexpr double kInequalityTolerance = 1e-9;
inline constexpr double kEntropySlack = 1e-10;
inline constexpr double kConservationTolerance = 1e-10;
inline constexpr double kMassSlack = 1e-12;

/// Runs one command; CSV artifacts go to manifest.output_dir, the summary and
/// diagnostics to `out` / `err`.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

int cmd_verify_lr(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_verify_csiszar(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_power_iterate(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err);

}  // namespace grekit::cli
