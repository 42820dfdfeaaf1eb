#include "lqnash/cli.hpp"

#include <fstream>
#include <iostream>

namespace lqnash::cli {

namespace {

using nlohmann::json;

void print_error(const std::string& type, const std::string& message, json extra = json::object()) {
  json err = {{"type", type}, {"message", message}};
  for (auto& item : extra.items()) err[item.key()] = item.value();
  std::cerr << json{{"error", err}}.dump() << std::endl;
}

json validation_to_json(const ValidationReport& report) {
  json failures = json::array();
  for (const ValidationEntry& entry : report.failures()) {
    failures.push_back({{"check", entry.check},
                        {"level", entry.level},
                        {"node", entry.node},
                        {"value", entry.value}});
  }
  return {{"verdict", report.passed() ? "pass" : "fail"},
          {"checks_run", report.entries.size()},
          {"failures", failures}};
}

bool write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    print_error("io", "cannot write '" + path + "'");
    return false;
  }
  out << text;
  return true;
}

}  // namespace

int cmd_validate(const std::string& input_path, std::optional<double> delta) {
  Problem problem;
  try {
    problem = read_problem_file(input_path);
  } catch (const ParseError& err) {
    print_error("parse", err.what());
    return kExitParseError;
  }
  const ValidationReport report = validate(problem.spec, delta.value_or(problem.options.delta));
  std::cout << validation_to_json(report).dump(2) << std::endl;
  return report.passed() ? kExitOk : kExitValidationFailed;
}

int cmd_solve(const std::string& input_path, const std::string& output_path,
              const SolveFlags& flags) {
  Problem problem;
  try {
    problem = read_problem_file(input_path);
  } catch (const ParseError& err) {
    print_error("parse", err.what());
    return kExitParseError;
  }
  const GameSpec& spec = problem.spec;

  const ValidationReport report = validate(spec, problem.options.delta);
  if (!report.passed()) {
    print_error("validation", "spec fails validation", validation_to_json(report));
    return kExitValidationFailed;
  }
  for (const std::string& warning : riccati_advisories(spec)) {
    std::cerr << "warning: " << warning << std::endl;
  }

  SolveOptions solve_options;
  solve_options.rcond_min = flags.rcond_min.value_or(problem.options.rcond_min);
  solve_options.check_assumptions = false;  // validated above
  RiccatiSolution sol;
  try {
    sol = solve_backward(spec, solve_options);
  } catch (const SingularUpsilon& err) {
    print_error("singular_upsilon", err.what(),
                {{"level", err.level()}, {"node", err.node()}, {"rcond", err.rcond()}});
    return kExitSingularUpsilon;
  }

  const Trajectory traj = simulate_feedback(spec, sol);
  const double j1 = cost(spec, traj.controls, Player::One);
  const double j2 = cost(spec, traj.controls, Player::Two);

  std::optional<CertificationReport> certification;
  if (!flags.no_certify) {
    CertifyOptions certify_options;
    certify_options.residual_tol = flags.residual_tol.value_or(problem.options.residual_tol);
    certify_options.nash_gap_tol = problem.options.nash_gap_tol;
    std::optional<NashGaps> gaps;
    try {
      gaps = nash_gap(spec, traj.controls);
    } catch (const SolverError& err) {
      print_error("oracle", err.what());
      return kExitParseError;
    }
    certification = certify(spec, sol, gaps, certify_options);
  }

  const std::string text =
      flags.format == "csv"
          ? result_csv(spec, sol, traj)
          : write_result(spec, sol, traj, j1, j2,
                         certification ? &*certification : nullptr)
                .dump(2);
  if (!write_text_file(output_path, text)) return kExitParseError;

  if (certification && !certification->passed()) {
    const CheckResult* failure = certification->first_failure();
    print_error("certification", "check '" + failure->name + "' failed",
                {{"value", failure->value}, {"tol", failure->tol}});
    return kExitCertificationFailed;
  }
  return kExitOk;
}

int cmd_generate(const Dims& dims, const std::string& preset, std::uint64_t seed, double magnitude,
                 const std::string& output_path) {
  ScenarioTree tree;
  GameSpec spec;
  try {
    tree = build_tree(dims.N, preset);
    spec = generate_random(dims, tree, seed, magnitude);
  } catch (const SolverError& err) {
    print_error("generate", err.what());
    return kExitParseError;
  }
  SolveSettings options;
  options.delta = 1.0;  // random instances satisfy the assumptions with delta 1
  options.seed = seed;
  if (!write_text_file(output_path, write_problem(spec, options).dump(2))) return kExitParseError;
  return kExitOk;
}

int cmd_verify(const std::string& input_path, const std::string& controls_path,
               std::optional<double> residual_tol) {
  Problem problem;
  ControlPair controls;
  try {
    problem = read_problem_file(input_path);
    controls = read_controls_file(controls_path, problem.spec);
  } catch (const ParseError& err) {
    print_error("parse", err.what());
    return kExitParseError;
  }
  const GameSpec& spec = problem.spec;

  const ValidationReport report = validate(spec, problem.options.delta);
  if (!report.passed()) {
    print_error("validation", "spec fails validation", validation_to_json(report));
    return kExitValidationFailed;
  }

  CertifyOptions options;
  options.residual_tol = residual_tol.value_or(problem.options.residual_tol);
  options.nash_gap_tol = problem.options.nash_gap_tol;
  std::optional<NashGaps> gaps;
  try {
    gaps = nash_gap(spec, controls);
  } catch (const SolverError& err) {
    print_error("oracle", err.what());
    return kExitParseError;
  }
  const CertificationReport certification = certify_controls(spec, controls, gaps, options);
  std::cout << report_to_json(certification).dump(2) << std::endl;
  return certification.passed() ? kExitOk : kExitCertificationFailed;
}

}  // namespace lqnash::cli
