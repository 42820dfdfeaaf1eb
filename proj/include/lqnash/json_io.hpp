#pragma once

#include <json.hpp>

#include "lqnash/game.hpp"

namespace lqnash {

// Options block of a problem document; absent fields keep these defaults.
struct SolveSettings {
  double delta = 1e-8;
  double rcond_min = 1e-10;
  double residual_tol = 1e-8;
  double nash_gap_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct Problem {
  GameSpec spec;
  SolveSettings options;
};

/// Parses a problem document. Node keys are root-to-node branch-index paths
/// ("", "0", "0.1", ...); every coefficient comes as {"constant": ...} or
/// {"per_node": {path: ...}}; unknown fields are rejected. Throws ParseError.
Problem read_problem(const nlohmann::json& doc);
Problem read_problem_file(const std::string& path);

nlohmann::json write_problem(const GameSpec& spec, const SolveSettings& options);

/// Controls document: either {"u": {path: vec}, "v": {...}} or a full result
/// document (controls pulled from its trajectory section).
ControlPair read_controls(const nlohmann::json& doc, const GameSpec& spec);
ControlPair read_controls_file(const std::string& path, const GameSpec& spec);

nlohmann::json report_to_json(const CertificationReport& report);

nlohmann::json write_result(const GameSpec& spec, const RiccatiSolution& sol,
                            const Trajectory& traj, double j1, double j2,
                            const CertificationReport* report);

/// One row per node: level, path, state, controls, rcond.
std::string result_csv(const GameSpec& spec, const RiccatiSolution& sol, const Trajectory& traj);

}  // namespace lqnash
