#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace carleson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

struct RunConfig {
  std::string command;  // separation, construct, counterexample, modelspace,
                        // interpolate, beurling, framebounds
  std::string input_path;
  std::string output_path;  // empty: stdout
  std::string csv_path;     // empty: no CSV, "-": stdout
  double tol = 1e-3;
  std::uint64_t seed = 0;
  unsigned grid_depth = 64;

  double nu = 0.5;
  double delta = 0.5;
  std::size_t n = 6;
  std::string m_schedule = "linear";
  double slack = 0.1;
  std::size_t trials = 16;
  std::vector<double> gammas{0.5, 0.1, 0.02};
};

const std::vector<std::string>& commands();

/// Throws InputError on out-of-range settings.
void validate(const RunConfig& config);

struct Outcome {
  nlohmann::json report;
  std::optional<std::string> csv;
  bool flagged = false;  // numerical diagnostics worth a nonzero exit
};

/// Runs one command without touching the filesystem except for reading
/// config.input_path.
Outcome execute(const RunConfig& config);

/// execute() plus artifact writing and error reporting. Returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// CSV column documentation for --help.
std::string csv_help();

}  // namespace carleson::cli
