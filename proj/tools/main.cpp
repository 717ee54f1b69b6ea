#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "carleson/cli.hpp"

namespace {

struct CommandHelp {
  const char* name;
  const char* description;
};

constexpr CommandHelp kCommands[] = {
    {"separation", "uniform strong separation of a matrix sequence (--input)"},
    {"construct", "build a uniformly strongly separated sequence (--delta --nu --n --m)"},
    {"counterexample", "strongly but not uniformly separated sequence (--nu --n --m)"},
    {"modelspace", "model-space Grams, pairwise sines and frame bounds (--input)"},
    {"interpolate", "minimal-norm interpolant of a problem file (--input)"},
    {"beurling", "dual Beurling family of a matrix sequence (--input --slack --trials)"},
    {"framebounds", "frame bounds of model spaces (--input) or the gamma sweep"},
};

}  // namespace

int main(int argc, char** argv) {
  carleson::cli::RunConfig config;

  CLI::App app{"Interpolating sequences of matrices: separation, construction and interpolation"};
  app.footer(carleson::cli::csv_help() +
             "\nExit status: 0 ok, 1 input error, 2 numerical diagnostics or flagged results.\n"
             "Schemas for inputs and reports live in schemas/.");
  app.require_subcommand(1);

  for (const auto& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c.name, c.description);
    sub->add_option("--input", config.input_path, "input JSON (matrix sequence or problem)");
    sub->add_option("--out", config.output_path, "JSON report path (default stdout)");
    sub->add_option("--csv", config.csv_path, "CSV output path, '-' for stdout");
    sub->add_option("--tol", config.tol, "scan tolerance in (0, 0.1]")->capture_default_str();
    sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
    sub->add_option("--grid-depth", config.grid_depth, "maximal scan refinement depth")
        ->capture_default_str();
    sub->add_option("--nu", config.nu, "separation parameter nu")->capture_default_str();
    sub->add_option("--delta", config.delta, "separation parameter delta")->capture_default_str();
    sub->add_option("--n", config.n, "number of steps or pairs")->capture_default_str();
    sub->add_option("--m", config.m_schedule,
                    "multiplicities: linear, quadratic, constant or a comma list")
        ->capture_default_str();
    sub->add_option("--slack", config.slack, "Beurling slack above M^2")->capture_default_str();
    sub->add_option("--trials", config.trials, "random problems for the interpolation constant")
        ->capture_default_str();
    sub->add_option("--gamma", config.gammas, "gamma values for the frame sweep")
        ->delimiter(',')
        ->capture_default_str();
    sub->callback([&config, name = std::string(c.name)] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : carleson::cli::kExitInput;
  }
  return carleson::cli::run(config, std::cout, std::cerr);
}
