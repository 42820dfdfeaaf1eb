#include "lqnash/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lqnash {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ParseError("unknown field '" + item.key() + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + " must be a number");
  return j.get<double>();
}

Eigen::MatrixXd parse_matrix(const json& j, Eigen::Index rows, Eigen::Index cols,
                             const std::string& where) {
  // Vectors may come flat; matrices are nested arrays, row-major.
  if (cols == 1 && j.is_array() && (j.empty() || j.front().is_number())) {
    if (static_cast<Eigen::Index>(j.size()) != rows) {
      throw ParseError(where + ": expected " + std::to_string(rows) + " entries");
    }
    Eigen::MatrixXd out(rows, 1);
    for (Eigen::Index r = 0; r < rows; ++r) out(r, 0) = number(j[r], where);
    return out;
  }
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(where + ": expected " + std::to_string(cols) + " columns");
    }
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = number(row[c], where);
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& mat) {
  if (mat.cols() == 1) {
    json flat = json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) flat.push_back(mat(r, 0));
    return flat;
  }
  json rows = json::array();
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < mat.cols(); ++c) row.push_back(mat(r, c));
    rows.push_back(row);
  }
  return rows;
}

ScenarioTree parse_tree(const json& j, int horizon) {
  reject_unknown_fields(j, {"preset", "branches"}, "tree");
  const bool has_preset = j.contains("preset");
  const bool has_branches = j.contains("branches");
  if (has_preset == has_branches) {
    throw ParseError("tree needs exactly one of 'preset' or 'branches'");
  }
  try {
    if (has_preset) {
      if (!j["preset"].is_string()) throw ParseError("tree preset must be a string");
      return build_tree(horizon, j["preset"].get<std::string>());
    }
    const json& levels = j["branches"];
    if (!levels.is_array()) throw ParseError("tree branches must be an array of levels");
    std::vector<std::vector<Branch>> per_level;
    for (const json& level : levels) {
      if (!level.is_array()) throw ParseError("each tree level must be an array of [omega, prob]");
      std::vector<Branch> branches;
      for (const json& pair : level) {
        if (!pair.is_array() || pair.size() != 2) {
          throw ParseError("each branch must be an [omega, prob] pair");
        }
        branches.push_back({number(pair[0], "branch omega"), number(pair[1], "branch prob")});
      }
      per_level.push_back(std::move(branches));
    }
    return build_tree(horizon, per_level);
  } catch (const ParseError&) {
    throw;
  } catch (const SolverError& err) {
    throw ParseError(std::string("tree: ") + err.what());
  }
}

// Reads one coefficient: a single matrix reused at every node of the level
// range, or an exhaustive per-node map.
void parse_coefficient(const json& field, const std::string& name, const ScenarioTree& tree,
                       int first_level, int last_level, Eigen::Index rows, Eigen::Index cols,
                       TreeProcessFamily& out) {
  reject_unknown_fields(field, {"constant", "per_node"}, "coefficient " + name);
  const bool constant = field.contains("constant");
  if (constant == field.contains("per_node")) {
    throw ParseError("coefficient " + name + " needs exactly one of 'constant' or 'per_node'");
  }

  out = make_family(tree, first_level, last_level, rows, cols);
  if (constant) {
    const Eigen::MatrixXd value = parse_matrix(field["constant"], rows, cols, name);
    for (int k = first_level; k <= last_level; ++k) {
      for (auto& entry : out[k].values) entry = value;
    }
    return;
  }

  const json& map = field["per_node"];
  if (!map.is_object()) throw ParseError("coefficient " + name + ": per_node must be an object");
  std::size_t expected = 0;
  for (int k = first_level; k <= last_level; ++k) expected += tree.level_size(k);
  if (map.size() != expected) {
    throw ParseError("coefficient " + name + ": per_node must cover all " +
                     std::to_string(expected) + " nodes, got " + std::to_string(map.size()));
  }
  for (const auto& item : map.items()) {
    std::pair<int, int> at;
    try {
      at = tree.find_path(item.key());
    } catch (const SolverError& err) {
      throw ParseError("coefficient " + name + ": " + err.what());
    }
    if (at.first < first_level || at.first > last_level) {
      throw ParseError("coefficient " + name + ": node '" + item.key() +
                       "' is at level " + std::to_string(at.first));
    }
    out[at.first].values[at.second] =
        parse_matrix(item.value(), rows, cols, name + "['" + item.key() + "']");
  }
}

void parse_terminal(const json& field, const std::string& name, const ScenarioTree& tree,
                    Eigen::Index rows, Eigen::Index cols, TreeProcess& out) {
  TreeProcessFamily family;
  parse_coefficient(field, name, tree, tree.horizon(), tree.horizon(), rows, cols, family);
  out = family[tree.horizon()];
}

json family_to_json(const ScenarioTree& tree, const TreeProcessFamily& family, int first_level,
                    int last_level) {
  json map = json::object();
  for (int k = first_level; k <= last_level; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      map[tree.node_path(k, j)] = matrix_to_json(family[k].values[j]);
    }
  }
  return map;
}

const json& require_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError("missing field '" + key + "' in " + where);
  return obj[key];
}

}  // namespace

Problem read_problem(const json& doc) {
  reject_unknown_fields(doc, {"dims", "tree", "coefficients", "xi", "options"}, "problem");

  const json& dims_json = require_field(doc, "dims", "problem");
  reject_unknown_fields(dims_json, {"n", "m", "l", "N"}, "dims");
  auto dim_field = [&](const char* key) {
    const json& value = require_field(dims_json, key, "dims");
    if (!value.is_number_integer() && !value.is_number_unsigned()) {
      throw ParseError(std::string("dims.") + key + " must be an integer");
    }
    const long long dim = value.get<long long>();
    if (dim < 1 || dim > 1 << 20) throw ParseError(std::string("dims.") + key + " out of range");
    return static_cast<int>(dim);
  };
  const Dims dims{dim_field("n"), dim_field("m"), dim_field("l"), dim_field("N")};

  Problem problem;
  problem.spec.dims = dims;
  problem.spec.tree = parse_tree(require_field(doc, "tree", "problem"), dims.N);
  const ScenarioTree& tree = problem.spec.tree;

  const json& coeff = require_field(doc, "coefficients", "problem");
  reject_unknown_fields(coeff,
                        {"A", "B", "C", "D", "E", "F", "b", "sigma", "Q", "L", "R", "q", "rho",
                         "P", "M", "S", "p", "theta", "G_N", "g_N", "H_N", "h_N"},
                        "coefficients");
  const auto [n, m, l, N] = dims;
  auto field = [&](const char* name) -> const json& { return require_field(coeff, name, "coefficients"); };

  DynamicsCoefficients& dyn = problem.spec.dynamics;
  parse_coefficient(field("A"), "A", tree, 0, N - 1, n, n, dyn.A);
  parse_coefficient(field("B"), "B", tree, 0, N - 1, n, m, dyn.B);
  parse_coefficient(field("C"), "C", tree, 0, N - 1, n, l, dyn.C);
  parse_coefficient(field("D"), "D", tree, 0, N - 1, n, n, dyn.D);
  parse_coefficient(field("E"), "E", tree, 0, N - 1, n, m, dyn.E);
  parse_coefficient(field("F"), "F", tree, 0, N - 1, n, l, dyn.F);
  parse_coefficient(field("b"), "b", tree, 0, N - 1, n, 1, dyn.b);
  parse_coefficient(field("sigma"), "sigma", tree, 0, N - 1, n, 1, dyn.sigma);

  CostCoefficients& costs = problem.spec.costs;
  parse_coefficient(field("Q"), "Q", tree, 0, N - 1, n, n, costs.Q);
  parse_coefficient(field("L"), "L", tree, 0, N - 1, m, n, costs.L);
  parse_coefficient(field("R"), "R", tree, 0, N - 1, m, m, costs.R);
  parse_coefficient(field("q"), "q", tree, 0, N - 1, n, 1, costs.q);
  parse_coefficient(field("rho"), "rho", tree, 0, N - 1, m, 1, costs.rho);
  parse_coefficient(field("P"), "P", tree, 0, N - 1, n, n, costs.P);
  parse_coefficient(field("M"), "M", tree, 0, N - 1, l, n, costs.M);
  parse_coefficient(field("S"), "S", tree, 0, N - 1, l, l, costs.S);
  parse_coefficient(field("p"), "p", tree, 0, N - 1, n, 1, costs.p);
  parse_coefficient(field("theta"), "theta", tree, 0, N - 1, l, 1, costs.theta);
  parse_terminal(field("G_N"), "G_N", tree, n, n, costs.G_N);
  parse_terminal(field("g_N"), "g_N", tree, n, 1, costs.g_N);
  parse_terminal(field("H_N"), "H_N", tree, n, n, costs.H_N);
  parse_terminal(field("h_N"), "h_N", tree, n, 1, costs.h_N);

  problem.spec.xi = parse_matrix(require_field(doc, "xi", "problem"), n, 1, "xi");

  if (doc.contains("options")) {
    const json& options = doc["options"];
    reject_unknown_fields(options, {"delta", "rcond_min", "residual_tol", "nash_gap_tol", "seed"},
                          "options");
    if (options.contains("delta")) problem.options.delta = number(options["delta"], "options.delta");
    if (options.contains("rcond_min")) {
      problem.options.rcond_min = number(options["rcond_min"], "options.rcond_min");
    }
    if (options.contains("residual_tol")) {
      problem.options.residual_tol = number(options["residual_tol"], "options.residual_tol");
    }
    if (options.contains("nash_gap_tol")) {
      problem.options.nash_gap_tol = number(options["nash_gap_tol"], "options.nash_gap_tol");
    }
    if (options.contains("seed")) {
      if (!options["seed"].is_number_unsigned()) throw ParseError("options.seed must be unsigned");
      problem.options.seed = options["seed"].get<std::uint64_t>();
    }
  }
  return problem;
}

Problem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& err) {
    throw ParseError("invalid JSON in '" + path + "': " + err.what());
  }
  return read_problem(doc);
}

json write_problem(const GameSpec& spec, const SolveSettings& options) {
  const auto [n, m, l, N] = spec.dims;
  json doc;
  doc["dims"] = {{"n", n}, {"m", m}, {"l", l}, {"N", N}};

  if (!spec.tree.preset().empty()) {
    doc["tree"] = {{"preset", spec.tree.preset()}};
  } else {
    json levels = json::array();
    for (const auto& level : spec.tree.level_branches()) {
      json pairs = json::array();
      for (const Branch& br : level) pairs.push_back({br.omega, br.prob});
      levels.push_back(pairs);
    }
    doc["tree"] = {{"branches", levels}};
  }

  auto per_node = [&](const TreeProcessFamily& family, int first, int last) {
    return json{{"per_node", family_to_json(spec.tree, family, first, last)}};
  };
  auto terminal = [&](const TreeProcess& z) {
    TreeProcessFamily family(N + 1);
    family[N] = z;
    return json{{"per_node", family_to_json(spec.tree, family, N, N)}};
  };

  json coeff;
  coeff["A"] = per_node(spec.dynamics.A, 0, N - 1);
  coeff["B"] = per_node(spec.dynamics.B, 0, N - 1);
  coeff["C"] = per_node(spec.dynamics.C, 0, N - 1);
  coeff["D"] = per_node(spec.dynamics.D, 0, N - 1);
  coeff["E"] = per_node(spec.dynamics.E, 0, N - 1);
  coeff["F"] = per_node(spec.dynamics.F, 0, N - 1);
  coeff["b"] = per_node(spec.dynamics.b, 0, N - 1);
  coeff["sigma"] = per_node(spec.dynamics.sigma, 0, N - 1);
  coeff["Q"] = per_node(spec.costs.Q, 0, N - 1);
  coeff["L"] = per_node(spec.costs.L, 0, N - 1);
  coeff["R"] = per_node(spec.costs.R, 0, N - 1);
  coeff["q"] = per_node(spec.costs.q, 0, N - 1);
  coeff["rho"] = per_node(spec.costs.rho, 0, N - 1);
  coeff["P"] = per_node(spec.costs.P, 0, N - 1);
  coeff["M"] = per_node(spec.costs.M, 0, N - 1);
  coeff["S"] = per_node(spec.costs.S, 0, N - 1);
  coeff["p"] = per_node(spec.costs.p, 0, N - 1);
  coeff["theta"] = per_node(spec.costs.theta, 0, N - 1);
  coeff["G_N"] = terminal(spec.costs.G_N);
  coeff["g_N"] = terminal(spec.costs.g_N);
  coeff["H_N"] = terminal(spec.costs.H_N);
  coeff["h_N"] = terminal(spec.costs.h_N);
  doc["coefficients"] = coeff;

  doc["xi"] = matrix_to_json(spec.xi);
  doc["options"] = {{"delta", options.delta},
                    {"rcond_min", options.rcond_min},
                    {"residual_tol", options.residual_tol},
                    {"nash_gap_tol", options.nash_gap_tol},
                    {"seed", options.seed}};
  return doc;
}

ControlPair read_controls(const json& doc, const GameSpec& spec) {
  const json* source = &doc;
  if (doc.is_object() && doc.contains("trajectory")) source = &doc["trajectory"];
  if (!source->is_object() || !source->contains("u") || !source->contains("v")) {
    throw ParseError("controls document needs 'u' and 'v' per-node maps");
  }

  const auto [n, m, l, N] = spec.dims;
  ControlPair controls;
  parse_coefficient(json{{"per_node", (*source)["u"]}}, "u", spec.tree, 0, N - 1, m, 1, controls.u);
  parse_coefficient(json{{"per_node", (*source)["v"]}}, "v", spec.tree, 0, N - 1, l, 1, controls.v);
  return controls;
}

ControlPair read_controls_file(const std::string& path, const GameSpec& spec) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& err) {
    throw ParseError("invalid JSON in '" + path + "': " + err.what());
  }
  return read_controls(doc, spec);
}

json report_to_json(const CertificationReport& report) {
  json checks = json::array();
  for (const CheckResult& check : report.checks) {
    checks.push_back({{"name", check.name},
                      {"value", check.value},
                      {"tol", check.tol},
                      {"pass", check.pass}});
  }
  return {{"verdict", report.passed() ? "pass" : "fail"},
          {"residual_tol", report.residual_tol},
          {"nash_gap_tol", report.nash_gap_tol},
          {"checks", checks}};
}

json write_result(const GameSpec& spec, const RiccatiSolution& sol, const Trajectory& traj,
                  double j1, double j2, const CertificationReport* report) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;

  json doc;
  doc["riccati"] = {{"T", family_to_json(tree, sol.T, 0, N)},
                    {"phi", family_to_json(tree, sol.phi, 0, N)},
                    {"Pi", family_to_json(tree, sol.Pi, 0, N - 1)},
                    {"Sigma", family_to_json(tree, sol.Sigma, 0, N - 1)}};
  doc["trajectory"] = {{"x", family_to_json(tree, traj.x, 0, N)},
                       {"u", family_to_json(tree, traj.controls.u, 0, N - 1)},
                       {"v", family_to_json(tree, traj.controls.v, 0, N - 1)},
                       {"y1", family_to_json(tree, traj.y1, 0, N)},
                       {"y2", family_to_json(tree, traj.y2, 0, N)}};
  doc["costs"] = {{"J1", j1}, {"J2", j2}, {"V1", j1}, {"V2", j2}};
  if (report != nullptr) doc["certification"] = report_to_json(*report);

  json rcond = json::object();
  json gain_residual = json::object();
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const std::string path = tree.node_path(k, j);
      rcond[path] = sol.diagnostics[k][j].rcond;
      gain_residual[path] = sol.diagnostics[k][j].gain_residual;
    }
  }
  doc["diagnostics"] = {{"rcond", rcond},
                        {"gain_residual", gain_residual},
                        {"max_fourth_moment", tree.max_fourth_moment()}};
  return doc;
}

std::string result_csv(const GameSpec& spec, const RiccatiSolution& sol, const Trajectory& traj) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;

  std::ostringstream out;
  out.precision(17);
  out << "level,path";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  for (int i = 0; i < m; ++i) out << ",u" << i;
  for (int i = 0; i < l; ++i) out << ",v" << i;
  out << ",rcond\n";

  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      out << k << ',' << tree.node_path(k, j);
      for (int i = 0; i < n; ++i) out << ',' << traj.x[k].values[j](i, 0);
      if (k < N) {
        for (int i = 0; i < m; ++i) out << ',' << traj.controls.u[k].values[j](i, 0);
        for (int i = 0; i < l; ++i) out << ',' << traj.controls.v[k].values[j](i, 0);
        out << ',' << sol.diagnostics[k][j].rcond;
      } else {
        for (int i = 0; i < m + l; ++i) out << ',';
        out << ',';
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace lqnash
