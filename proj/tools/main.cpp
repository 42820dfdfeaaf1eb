#include <CLI11.hpp>

#include <iostream>

#include "lqnash/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Open-loop Nash equilibrium solver for stochastic LQ difference games on scenario trees"};
  app.require_subcommand(1);

  std::string input, output, controls;
  std::string preset = "rademacher";
  std::string format = "json";
  lqnash::Dims dims;
  std::uint64_t seed = 0;
  double magnitude = 1.0;
  double delta = 0.0, rcond_min = 0.0, tol = 0.0;

  CLI::App* validate = app.add_subcommand("validate", "Check a problem file against the standing assumptions");
  validate->add_option("--input", input, "Problem JSON")->required();
  CLI::Option* delta_opt = validate->add_option("--delta", delta, "Positivity margin for the control weights");

  CLI::App* solve = app.add_subcommand("solve", "Solve and certify a problem file");
  solve->add_option("--input", input, "Problem JSON")->required();
  solve->add_option("--output", output, "Result path")->required();
  CLI::Option* rcond_opt = solve->add_option("--rcond-min", rcond_min, "Conditioning gate for the gain systems");
  CLI::Option* tol_opt = solve->add_option("--tol", tol, "Certification residual tolerance");
  bool no_certify = false;
  solve->add_flag("--no-certify", no_certify, "Skip certification");
  solve->add_option("--format", format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* generate = app.add_subcommand("generate", "Write a random instance that satisfies the assumptions");
  generate->add_option("--n", dims.n, "State dimension")->required();
  generate->add_option("--m", dims.m, "Player-1 control dimension")->required();
  generate->add_option("--l", dims.l, "Player-2 control dimension")->required();
  generate->add_option("--horizon", dims.N, "Number of time steps")->required();
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--magnitude", magnitude, "Coefficient magnitude");
  generate->add_option("--preset", preset, "Tree preset");
  generate->add_option("--output", output, "Problem path")->required();

  CLI::App* verify = app.add_subcommand("verify", "Certify externally supplied controls");
  verify->add_option("--input", input, "Problem JSON")->required();
  verify->add_option("--controls", controls, "Controls or result JSON")->required();
  CLI::Option* verify_tol_opt = verify->add_option("--tol", tol, "Certification residual tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      return lqnash::cli::cmd_validate(
          input, delta_opt->count() ? std::optional<double>(delta) : std::nullopt);
    }
    if (solve->parsed()) {
      lqnash::cli::SolveFlags flags;
      if (rcond_opt->count()) flags.rcond_min = rcond_min;
      if (tol_opt->count()) flags.residual_tol = tol;
      flags.no_certify = no_certify;
      flags.format = format;
      return lqnash::cli::cmd_solve(input, output, flags);
    }
    if (generate->parsed()) {
      return lqnash::cli::cmd_generate(dims, preset, seed, magnitude, output);
    }
    return lqnash::cli::cmd_verify(
        input, controls, verify_tol_opt->count() ? std::optional<double>(tol) : std::nullopt);
  } catch (const std::exception& err) {
    std::cerr << R"({"error":{"type":"internal","message":")" << err.what() << R"("}})"
              << std::endl;
    return lqnash::cli::kExitParseError;
  }
}
