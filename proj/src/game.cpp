#include "lqnash/game.hpp"

#include <cmath>
#include <random>

namespace lqnash {

namespace {

void check_controls(const GameSpec& spec, const ControlPair& controls) {
  const auto [n, m, l, N] = spec.dims;
  if (static_cast<int>(controls.u.size()) < N || static_cast<int>(controls.v.size()) < N) {
    throw NonAdaptedProcess("control families do not cover levels 0.." + std::to_string(N - 1));
  }
  for (int k = 0; k < N; ++k) {
    check_process(spec.tree, controls.u[k], k, m, 1);
    check_process(spec.tree, controls.v[k], k, l, 1);
  }
}

void check_direction(const GameSpec& spec, const TreeProcessFamily& direction, Player player) {
  const int dim = player == Player::One ? spec.dims.m : spec.dims.l;
  if (static_cast<int>(direction.size()) < spec.dims.N) {
    throw NonAdaptedProcess("direction does not cover levels 0.." + std::to_string(spec.dims.N - 1));
  }
  for (int k = 0; k < spec.dims.N; ++k) check_process(spec.tree, direction[k], k, dim, 1);
}

double sup_norm(const Eigen::MatrixXd& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

}  // namespace

TreeProcessFamily simulate_forward(const GameSpec& spec, const ControlPair& controls) {
  const auto [n, m, l, N] = spec.dims;
  check_controls(spec, controls);
  const ScenarioTree& tree = spec.tree;

  TreeProcessFamily x = make_family(tree, 0, N, n, 1);
  x[0].values[0] = spec.xi;
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const TreeNode& node = tree.node(k, j);
      const Eigen::VectorXd drift = spec.dynamics.A[k].values[j] * x[k].values[j] +
                                    spec.dynamics.B[k].values[j] * controls.u[k].values[j] +
                                    spec.dynamics.C[k].values[j] * controls.v[k].values[j] +
                                    spec.dynamics.b[k].values[j];
      const Eigen::VectorXd diffusion = spec.dynamics.D[k].values[j] * x[k].values[j] +
                                        spec.dynamics.E[k].values[j] * controls.u[k].values[j] +
                                        spec.dynamics.F[k].values[j] * controls.v[k].values[j] +
                                        spec.dynamics.sigma[k].values[j];
      for (int i = 0; i < static_cast<int>(node.branches.size()); ++i) {
        x[k + 1].values[node.first_child + i] = drift + node.branches[i].omega * diffusion;
      }
    }
  }
  return x;
}

AdjointSolution solve_adjoints(const GameSpec& spec, const TreeProcessFamily& x,
                               const ControlPair& controls) {
  const auto [n, m, l, N] = spec.dims;
  check_controls(spec, controls);
  const ScenarioTree& tree = spec.tree;

  AdjointSolution adj;
  adj.y1 = make_family(tree, 0, N, n, 1);
  adj.y2 = make_family(tree, 0, N, n, 1);
  adj.Y = make_family(tree, 0, N, 2 * n, 1);

  for (int j = 0; j < tree.level_size(N); ++j) {
    adj.y1[N].values[j] =
        spec.costs.G_N.values[j] * x[N].values[j] + spec.costs.g_N.values[j];
    adj.y2[N].values[j] =
        spec.costs.H_N.values[j] * x[N].values[j] + spec.costs.h_N.values[j];
  }

  for (int k = N - 1; k >= 0; --k) {
    const TreeProcess ey1 = cond_expect(tree, adj.y1[k + 1], Weight::One);
    const TreeProcess ey1w = cond_expect(tree, adj.y1[k + 1], Weight::Omega);
    const TreeProcess ey2 = cond_expect(tree, adj.y2[k + 1], Weight::One);
    const TreeProcess ey2w = cond_expect(tree, adj.y2[k + 1], Weight::Omega);
    for (int j = 0; j < tree.level_size(k); ++j) {
      adj.y1[k].values[j] =
          spec.dynamics.A[k].values[j].transpose() * ey1.values[j] +
          spec.dynamics.D[k].values[j].transpose() * ey1w.values[j] +
          spec.costs.Q[k].values[j] * x[k].values[j] +
          spec.costs.L[k].values[j].transpose() * controls.u[k].values[j] +
          spec.costs.q[k].values[j];
      adj.y2[k].values[j] =
          spec.dynamics.A[k].values[j].transpose() * ey2.values[j] +
          spec.dynamics.D[k].values[j].transpose() * ey2w.values[j] +
          spec.costs.P[k].values[j] * x[k].values[j] +
          spec.costs.M[k].values[j].transpose() * controls.v[k].values[j] +
          spec.costs.p[k].values[j];
    }
  }

  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      adj.Y[k].values[j].resize(2 * n, 1);
      adj.Y[k].values[j] << adj.y1[k].values[j], adj.y2[k].values[j];
    }
  }
  return adj;
}

Trajectory simulate_feedback(const GameSpec& spec, const RiccatiSolution& sol) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;

  Trajectory traj;
  traj.x = make_family(tree, 0, N, n, 1);
  traj.controls.u = make_family(tree, 0, N - 1, m, 1);
  traj.controls.v = make_family(tree, 0, N - 1, l, 1);
  traj.x[0].values[0] = spec.xi;

  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const Eigen::VectorXd pi =
          sol.Pi[k].values[j] * traj.x[k].values[j] + sol.Sigma[k].values[j];
      traj.controls.u[k].values[j] = pi.head(m);
      traj.controls.v[k].values[j] = pi.tail(l);

      const TreeNode& node = tree.node(k, j);
      const Eigen::VectorXd drift = spec.dynamics.A[k].values[j] * traj.x[k].values[j] +
                                    spec.dynamics.B[k].values[j] * pi.head(m) +
                                    spec.dynamics.C[k].values[j] * pi.tail(l) +
                                    spec.dynamics.b[k].values[j];
      const Eigen::VectorXd diffusion = spec.dynamics.D[k].values[j] * traj.x[k].values[j] +
                                        spec.dynamics.E[k].values[j] * pi.head(m) +
                                        spec.dynamics.F[k].values[j] * pi.tail(l) +
                                        spec.dynamics.sigma[k].values[j];
      for (int i = 0; i < static_cast<int>(node.branches.size()); ++i) {
        traj.x[k + 1].values[node.first_child + i] = drift + node.branches[i].omega * diffusion;
      }
    }
  }

  AdjointSolution adj = solve_adjoints(spec, traj.x, traj.controls);
  traj.y1 = std::move(adj.y1);
  traj.y2 = std::move(adj.y2);
  traj.Y = std::move(adj.Y);
  return traj;
}

double cost(const GameSpec& spec, const ControlPair& controls, Player player) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;
  const TreeProcessFamily x = simulate_forward(spec, controls);

  double total = 0.0;
  for (int j = 0; j < tree.level_size(N); ++j) {
    const double prob = tree.node(N, j).prob;
    const Eigen::VectorXd& xN = x[N].values[j];
    if (player == Player::One) {
      total += prob * (xN.dot(spec.costs.G_N.values[j] * xN) +
                       2.0 * spec.costs.g_N.values[j].col(0).dot(xN));
    } else {
      total += prob * (xN.dot(spec.costs.H_N.values[j] * xN) +
                       2.0 * spec.costs.h_N.values[j].col(0).dot(xN));
    }
  }
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const double prob = tree.node(k, j).prob;
      const Eigen::VectorXd& xk = x[k].values[j];
      if (player == Player::One) {
        const Eigen::VectorXd& u = controls.u[k].values[j];
        total += prob * (xk.dot(spec.costs.Q[k].values[j] * xk) +
                         2.0 * u.dot(spec.costs.L[k].values[j] * xk) +
                         u.dot(spec.costs.R[k].values[j] * u) +
                         2.0 * spec.costs.q[k].values[j].col(0).dot(xk) +
                         2.0 * spec.costs.rho[k].values[j].col(0).dot(u));
      } else {
        const Eigen::VectorXd& v = controls.v[k].values[j];
        total += prob * (xk.dot(spec.costs.P[k].values[j] * xk) +
                         2.0 * v.dot(spec.costs.M[k].values[j] * xk) +
                         v.dot(spec.costs.S[k].values[j] * v) +
                         2.0 * spec.costs.p[k].values[j].col(0).dot(xk) +
                         2.0 * spec.costs.theta[k].values[j].col(0).dot(v));
      }
    }
  }
  return 0.5 * total;
}

TreeProcessFamily variational_state(const GameSpec& spec, const TreeProcessFamily& direction,
                                    Player player) {
  const auto [n, m, l, N] = spec.dims;
  check_direction(spec, direction, player);
  const ScenarioTree& tree = spec.tree;
  const TreeProcessFamily& gain = player == Player::One ? spec.dynamics.B : spec.dynamics.C;
  const TreeProcessFamily& noise_gain = player == Player::One ? spec.dynamics.E : spec.dynamics.F;

  TreeProcessFamily x = make_family(tree, 0, N, n, 1);
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const TreeNode& node = tree.node(k, j);
      const Eigen::VectorXd drift = spec.dynamics.A[k].values[j] * x[k].values[j] +
                                    gain[k].values[j] * direction[k].values[j];
      const Eigen::VectorXd diffusion = spec.dynamics.D[k].values[j] * x[k].values[j] +
                                        noise_gain[k].values[j] * direction[k].values[j];
      for (int i = 0; i < static_cast<int>(node.branches.size()); ++i) {
        x[k + 1].values[node.first_child + i] = drift + node.branches[i].omega * diffusion;
      }
    }
  }
  return x;
}

double cost_homogeneous(const GameSpec& spec, const TreeProcessFamily& direction, Player player) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;
  const TreeProcessFamily x = variational_state(spec, direction, player);

  double total = 0.0;
  for (int j = 0; j < tree.level_size(N); ++j) {
    const double prob = tree.node(N, j).prob;
    const Eigen::VectorXd& xN = x[N].values[j];
    const Eigen::MatrixXd& terminal =
        player == Player::One ? spec.costs.G_N.values[j] : spec.costs.H_N.values[j];
    total += prob * xN.dot(terminal * xN);
  }
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const double prob = tree.node(k, j).prob;
      const Eigen::VectorXd& xk = x[k].values[j];
      const Eigen::VectorXd& w = direction[k].values[j];
      if (player == Player::One) {
        total += prob * (xk.dot(spec.costs.Q[k].values[j] * xk) +
                         2.0 * w.dot(spec.costs.L[k].values[j] * xk) +
                         w.dot(spec.costs.R[k].values[j] * w));
      } else {
        total += prob * (xk.dot(spec.costs.P[k].values[j] * xk) +
                         2.0 * w.dot(spec.costs.M[k].values[j] * xk) +
                         w.dot(spec.costs.S[k].values[j] * w));
      }
    }
  }
  return 0.5 * total;
}

double gateaux(const GameSpec& spec, const ControlPair& controls,
               const TreeProcessFamily& direction, Player player) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;
  const TreeProcessFamily x = simulate_forward(spec, controls);
  const TreeProcessFamily xw = variational_state(spec, direction, player);

  double total = 0.0;
  for (int j = 0; j < tree.level_size(N); ++j) {
    const double prob = tree.node(N, j).prob;
    const Eigen::VectorXd& xN = x[N].values[j];
    const Eigen::VectorXd& xwN = xw[N].values[j];
    if (player == Player::One) {
      total += prob * (spec.costs.G_N.values[j] * xN + spec.costs.g_N.values[j]).col(0).dot(xwN);
    } else {
      total += prob * (spec.costs.H_N.values[j] * xN + spec.costs.h_N.values[j]).col(0).dot(xwN);
    }
  }
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const double prob = tree.node(k, j).prob;
      const Eigen::VectorXd& xk = x[k].values[j];
      const Eigen::VectorXd& xwk = xw[k].values[j];
      const Eigen::VectorXd& w = direction[k].values[j];
      if (player == Player::One) {
        const Eigen::VectorXd& u = controls.u[k].values[j];
        total += prob * ((spec.costs.Q[k].values[j] * xk +
                          spec.costs.L[k].values[j].transpose() * u +
                          spec.costs.q[k].values[j].col(0))
                             .dot(xwk) +
                         (spec.costs.L[k].values[j] * xk + spec.costs.R[k].values[j] * u +
                          spec.costs.rho[k].values[j].col(0))
                             .dot(w));
      } else {
        const Eigen::VectorXd& v = controls.v[k].values[j];
        total += prob * ((spec.costs.P[k].values[j] * xk +
                          spec.costs.M[k].values[j].transpose() * v +
                          spec.costs.p[k].values[j].col(0))
                             .dot(xwk) +
                         (spec.costs.M[k].values[j] * xk + spec.costs.S[k].values[j] * v +
                          spec.costs.theta[k].values[j].col(0))
                             .dot(w));
      }
    }
  }
  return total;
}

StationarityResiduals stationarity_residuals(const GameSpec& spec, const Trajectory& traj) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;

  StationarityResiduals res;
  res.r1 = make_family(tree, 0, N - 1, m, 1);
  res.r2 = make_family(tree, 0, N - 1, l, 1);

  for (int k = 0; k < N; ++k) {
    const TreeProcess ey1 = cond_expect(tree, traj.y1[k + 1], Weight::One);
    const TreeProcess ey1w = cond_expect(tree, traj.y1[k + 1], Weight::Omega);
    const TreeProcess ey2 = cond_expect(tree, traj.y2[k + 1], Weight::One);
    const TreeProcess ey2w = cond_expect(tree, traj.y2[k + 1], Weight::Omega);
    for (int j = 0; j < tree.level_size(k); ++j) {
      res.r1[k].values[j] = spec.dynamics.B[k].values[j].transpose() * ey1.values[j] +
                            spec.dynamics.E[k].values[j].transpose() * ey1w.values[j] +
                            spec.costs.L[k].values[j] * traj.x[k].values[j] +
                            spec.costs.R[k].values[j] * traj.controls.u[k].values[j] +
                            spec.costs.rho[k].values[j];
      res.r2[k].values[j] = spec.dynamics.C[k].values[j].transpose() * ey2.values[j] +
                            spec.dynamics.F[k].values[j].transpose() * ey2w.values[j] +
                            spec.costs.M[k].values[j] * traj.x[k].values[j] +
                            spec.costs.S[k].values[j] * traj.controls.v[k].values[j] +
                            spec.costs.theta[k].values[j];
      res.sup1 = std::max(res.sup1, sup_norm(res.r1[k].values[j]));
      res.sup2 = std::max(res.sup2, sup_norm(res.r2[k].values[j]));
    }
  }
  return res;
}

ControlPair explicit_controls(const GameSpec& spec, const Trajectory& traj) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;

  ControlPair out;
  out.u = make_family(tree, 0, N - 1, m, 1);
  out.v = make_family(tree, 0, N - 1, l, 1);

  for (int k = 0; k < N; ++k) {
    const TreeProcess ey1 = cond_expect(tree, traj.y1[k + 1], Weight::One);
    const TreeProcess ey1w = cond_expect(tree, traj.y1[k + 1], Weight::Omega);
    const TreeProcess ey2 = cond_expect(tree, traj.y2[k + 1], Weight::One);
    const TreeProcess ey2w = cond_expect(tree, traj.y2[k + 1], Weight::Omega);
    for (int j = 0; j < tree.level_size(k); ++j) {
      const Eigen::VectorXd rhs_u = spec.dynamics.B[k].values[j].transpose() * ey1.values[j] +
                                    spec.dynamics.E[k].values[j].transpose() * ey1w.values[j] +
                                    spec.costs.L[k].values[j] * traj.x[k].values[j] +
                                    spec.costs.rho[k].values[j].col(0);
      const Eigen::VectorXd rhs_v = spec.dynamics.C[k].values[j].transpose() * ey2.values[j] +
                                    spec.dynamics.F[k].values[j].transpose() * ey2w.values[j] +
                                    spec.costs.M[k].values[j] * traj.x[k].values[j] +
                                    spec.costs.theta[k].values[j].col(0);
      out.u[k].values[j] = -spec.costs.R[k].values[j].ldlt().solve(rhs_u);
      out.v[k].values[j] = -spec.costs.S[k].values[j].ldlt().solve(rhs_v);
    }
  }
  return out;
}

double DualityIdentity::gap() const { return std::abs(lhs - rhs); }

double DualityIdentity::relative_gap() const {
  return gap() / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

DualityIdentity duality_identity(const GameSpec& spec, const Trajectory& traj,
                                 const TreeProcessFamily& w) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;
  const TreeProcessFamily xw = variational_state(spec, w, Player::One);

  DualityIdentity identity;
  for (int j = 0; j < tree.level_size(N); ++j) {
    const Eigen::VectorXd xw_leaf = xw[N].values[j];
    identity.lhs += tree.node(N, j).prob * traj.y1[N].values[j].col(0).dot(xw_leaf);
  }
  for (int k = 0; k < N; ++k) {
    const TreeProcess ey1 = cond_expect(tree, traj.y1[k + 1], Weight::One);
    const TreeProcess ey1w = cond_expect(tree, traj.y1[k + 1], Weight::Omega);
    for (int j = 0; j < tree.level_size(k); ++j) {
      const double prob = tree.node(k, j).prob;
      const Eigen::VectorXd running =
          spec.costs.Q[k].values[j] * traj.x[k].values[j] +
          spec.costs.L[k].values[j].transpose() * traj.controls.u[k].values[j] +
          spec.costs.q[k].values[j];
      const Eigen::VectorXd xw_node = xw[k].values[j];
      identity.lhs += prob * running.dot(xw_node);
      const Eigen::VectorXd gradient =
          spec.dynamics.B[k].values[j].transpose() * ey1.values[j] +
          spec.dynamics.E[k].values[j].transpose() * ey1w.values[j];
      const Eigen::VectorXd w_node = w[k].values[j];
      identity.rhs += prob * gradient.dot(w_node);
    }
  }
  return identity;
}

double duality_identity_gap(const GameSpec& spec, const Trajectory& traj,
                            const TreeProcessFamily& w) {
  return duality_identity(spec, traj, w).gap();
}

ClosedLoopResiduals closed_loop_check(const GameSpec& spec, const RiccatiSolution& sol) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;

  ClosedLoopResiduals res;
  res.riccati = make_family(tree, 0, N - 1, 1, 1);
  res.gain = make_family(tree, 0, N - 1, 1, 1);
  res.offset = make_family(tree, 0, N - 1, 1, 1);
  res.consistency = make_family(tree, 0, N - 1, 1, 1);

  for (int k = 0; k < N; ++k) {
    const std::vector<RiccatiOperands> ops = moment_operands(tree, sol.T[k + 1], sol.phi[k + 1]);
    for (int j = 0; j < tree.level_size(k); ++j) {
      const CompactCoefficients cc = assemble_node(spec, k, j);
      const Eigen::MatrixXd l_t = op_l_transpose(cc, ops[j]);
      const Eigen::MatrixXd upsilon = op_upsilon(cc, ops[j]);

      const double r_riccati = sup_norm(sol.T[k].values[j] - op_delta(cc, ops[j]) -
                                        l_t * sol.Pi[k].values[j]);
      const double r_gain = sup_norm(op_gamma(cc, ops[j]) + upsilon * sol.Pi[k].values[j]);
      const double r_offset =
          sup_norm(sol.phi[k].values[j] - op_theta(cc, ops[j], cc.b, cc.sigma) -
                   l_t * sol.Sigma[k].values[j]);
      const double r_consistency = sup_norm(op_phi(cc, ops[j], cc.b, cc.sigma) +
                                            upsilon * sol.Sigma[k].values[j]);

      res.riccati[k].values[j](0, 0) = r_riccati;
      res.gain[k].values[j](0, 0) = r_gain;
      res.offset[k].values[j](0, 0) = r_offset;
      res.consistency[k].values[j](0, 0) = r_consistency;
      res.riccati_sup = std::max(res.riccati_sup, r_riccati);
      res.gain_sup = std::max(res.gain_sup, r_gain);
      res.offset_sup = std::max(res.offset_sup, r_offset);
      res.consistency_sup = std::max(res.consistency_sup, r_consistency);
    }
  }
  return res;
}

std::vector<TreeProcessFamily> sample_directions(const GameSpec& spec, Player player, int count,
                                                 std::uint64_t seed) {
  const int dim = player == Player::One ? spec.dims.m : spec.dims.l;
  std::mt19937_64 rng(seed ^ (player == Player::One ? 0x1ULL : 0x2ULL));
  auto draw = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };

  std::vector<TreeProcessFamily> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    TreeProcessFamily dir = make_family(spec.tree, 0, spec.dims.N - 1, dim, 1);
    for (int k = 0; k < spec.dims.N; ++k) {
      for (auto& value : dir[k].values) {
        for (Eigen::Index r = 0; r < value.rows(); ++r) value(r, 0) = draw();
      }
    }
    out.push_back(std::move(dir));
  }
  return out;
}

bool CertificationReport::passed() const {
  for (const CheckResult& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const CheckResult* CertificationReport::first_failure() const {
  for (const CheckResult& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

namespace {

void add_check(CertificationReport& report, const std::string& name, double value, double tol) {
  report.checks.push_back({name, value, tol, std::isfinite(value) && value <= tol});
}

// Directional-derivative, duality and best-response checks shared by both
// certification entry points.
void append_control_checks(CertificationReport& report, const GameSpec& spec,
                           const Trajectory& traj, const std::optional<NashGaps>& oracle_results,
                           const CertifyOptions& options) {
  const StationarityResiduals stat = stationarity_residuals(spec, traj);
  report.stationarity_1 = stat.r1;
  report.stationarity_2 = stat.r2;
  add_check(report, "stationarity player 1", stat.sup1, options.residual_tol);
  add_check(report, "stationarity player 2", stat.sup2, options.residual_tol);

  const double j1 = cost(spec, traj.controls, Player::One);
  const double j2 = cost(spec, traj.controls, Player::Two);
  const double scale1 = std::max(1.0, std::abs(j1));
  const double scale2 = std::max(1.0, std::abs(j2));

  double gateaux_sup_1 = 0.0, gateaux_sup_2 = 0.0, duality_sup = 0.0;
  for (const TreeProcessFamily& w :
       sample_directions(spec, Player::One, options.gateaux_samples, options.direction_seed)) {
    gateaux_sup_1 = std::max(gateaux_sup_1,
                             std::abs(gateaux(spec, traj.controls, w, Player::One)) / scale1);
    duality_sup = std::max(duality_sup, duality_identity(spec, traj, w).relative_gap());
  }
  for (const TreeProcessFamily& z :
       sample_directions(spec, Player::Two, options.gateaux_samples, options.direction_seed)) {
    gateaux_sup_2 = std::max(gateaux_sup_2,
                             std::abs(gateaux(spec, traj.controls, z, Player::Two)) / scale2);
  }
  add_check(report, "gateaux player 1", gateaux_sup_1, options.residual_tol);
  add_check(report, "gateaux player 2", gateaux_sup_2, options.residual_tol);
  add_check(report, "duality identity", duality_sup, options.residual_tol);

  if (oracle_results) {
    add_check(report, "nash gap u", oracle_results->gap_u, options.nash_gap_tol);
    add_check(report, "nash gap v", oracle_results->gap_v, options.nash_gap_tol);
    // Cost gaps must be nonnegative up to rounding and below the gap bound.
    auto add_cost_gap = [&](const std::string& name, double value) {
      const bool pass = std::isfinite(value) && value >= -1e-10 && value <= options.nash_gap_tol;
      report.checks.push_back({name, value, options.nash_gap_tol, pass});
    };
    add_cost_gap("cost gap player 1", oracle_results->cost_gap_1);
    add_cost_gap("cost gap player 2", oracle_results->cost_gap_2);
  }
}

}  // namespace

CertificationReport certify(const GameSpec& spec, const RiccatiSolution& sol,
                            const std::optional<NashGaps>& oracle_results,
                            const CertifyOptions& options) {
  const auto [n, m, l, N] = spec.dims;
  CertificationReport report;
  report.residual_tol = options.residual_tol;
  report.nash_gap_tol = options.nash_gap_tol;

  const Trajectory traj = simulate_feedback(spec, sol);

  report.ansatz = make_family(spec.tree, 0, N, 1, 1);
  double ansatz_sup = 0.0;
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j < spec.tree.level_size(k); ++j) {
      const double gap = sup_norm(traj.Y[k].values[j] - sol.T[k].values[j] * traj.x[k].values[j] -
                                  sol.phi[k].values[j]);
      report.ansatz[k].values[j](0, 0) = gap;
      ansatz_sup = std::max(ansatz_sup, gap);
    }
  }
  add_check(report, "ansatz", ansatz_sup, options.residual_tol);

  report.closed_loop = closed_loop_check(spec, sol);
  add_check(report, "closed loop riccati", report.closed_loop->riccati_sup, options.residual_tol);
  add_check(report, "closed loop gain", report.closed_loop->gain_sup, options.residual_tol);
  add_check(report, "closed loop offset", report.closed_loop->offset_sup, options.residual_tol);
  add_check(report, "closed loop consistency", report.closed_loop->consistency_sup,
            options.residual_tol);

  append_control_checks(report, spec, traj, oracle_results, options);
  return report;
}

CertificationReport certify_controls(const GameSpec& spec, const ControlPair& controls,
                                     const std::optional<NashGaps>& oracle_results,
                                     const CertifyOptions& options) {
  CertificationReport report;
  report.residual_tol = options.residual_tol;
  report.nash_gap_tol = options.nash_gap_tol;

  Trajectory traj;
  traj.x = simulate_forward(spec, controls);
  traj.controls = controls;
  AdjointSolution adj = solve_adjoints(spec, traj.x, traj.controls);
  traj.y1 = std::move(adj.y1);
  traj.y2 = std::move(adj.y2);
  traj.Y = std::move(adj.Y);

  append_control_checks(report, spec, traj, oracle_results, options);
  return report;
}

}  // namespace lqnash
