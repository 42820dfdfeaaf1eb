#include "lqnash/riccati.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

namespace lqnash {

namespace {

// Reciprocal 1-norm condition via the factorization: solves against identity
// columns instead of forming the inverse. Non-finite solves report 0.
double reciprocal_condition(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                            const Eigen::MatrixXd& mat) {
  const double norm = mat.cwiseAbs().colwise().sum().maxCoeff();
  if (!(norm > 0.0) || !std::isfinite(norm)) return 0.0;
  double inv_norm = 0.0;
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(mat.rows());
  for (Eigen::Index j = 0; j < mat.cols(); ++j) {
    unit.setZero();
    unit(j) = 1.0;
    const Eigen::VectorXd column = lu.solve(unit);
    if (!column.allFinite()) return 0.0;
    inv_norm = std::max(inv_norm, column.cwiseAbs().sum());
  }
  if (!(inv_norm > 0.0)) return 0.0;
  return 1.0 / (norm * inv_norm);
}

}  // namespace

RiccatiSolution solve_backward(const GameSpec& spec, const SolveOptions& options) {
  if (!(options.rcond_min > 0.0)) throw InvalidSpec("rcond_min must be positive");
  if (options.check_assumptions) {
    const ValidationReport report = validate(spec, options.assumption_delta);
    if (!report.passed()) {
      const ValidationEntry first = report.failures().front();
      throw AssumptionViolated("spec fails validation: " + first.check + " at level " +
                               std::to_string(first.level) + ", node " + std::to_string(first.node));
    }
  }

  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;
  const CompactFamily compact = assemble(spec);

  RiccatiSolution sol;
  sol.T = make_family(tree, N, N, 2 * n, n);
  sol.phi = make_family(tree, N, N, 2 * n, 1);
  sol.Pi = make_family(tree, 0, N - 1, m + l, n);
  sol.Sigma = make_family(tree, 0, N - 1, m + l, 1);
  sol.diagnostics.resize(N);

  for (int j = 0; j < tree.level_size(N); ++j) {
    sol.T[N].values[j] = compact.terminal[j].G;
    sol.phi[N].values[j] = compact.terminal[j].g;
  }

  for (int k = N - 1; k >= 0; --k) {
    std::vector<RiccatiOperands> ops = moment_operands(tree, sol.T[k + 1], sol.phi[k + 1]);
    sol.T[k] = make_process(tree, k, 2 * n, n);
    sol.phi[k] = make_process(tree, k, 2 * n, 1);
    sol.diagnostics[k].resize(tree.level_size(k));

    for (int j = 0; j < tree.level_size(k); ++j) {
      const CompactCoefficients& cc = compact.at[k][j];
      const RiccatiOperands& node_ops = ops[j];

      const Eigen::MatrixXd upsilon = op_upsilon(cc, node_ops);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(upsilon);
      const double rcond = reciprocal_condition(lu, upsilon);
      if (!(rcond >= options.rcond_min)) throw SingularUpsilon(k, j, rcond);

      const Eigen::MatrixXd gamma = op_gamma(cc, node_ops);
      const Eigen::VectorXd phi_rhs = op_phi(cc, node_ops, cc.b, cc.sigma);
      const Eigen::MatrixXd pi_gain = -lu.solve(gamma);
      const Eigen::VectorXd sigma_gain = -lu.solve(phi_rhs);

      const Eigen::MatrixXd l_t = op_l_transpose(cc, node_ops);
      sol.Pi[k].values[j] = pi_gain;
      sol.Sigma[k].values[j] = sigma_gain;
      sol.T[k].values[j] = op_delta(cc, node_ops) + l_t * pi_gain;
      sol.phi[k].values[j] = op_theta(cc, node_ops, cc.b, cc.sigma) + l_t * sigma_gain;

      RiccatiNodeDiagnostics& diag = sol.diagnostics[k][j];
      diag.rcond = rcond;
      diag.operands = node_ops;
      diag.gain_residual =
          std::max((upsilon * pi_gain + gamma).cwiseAbs().maxCoeff(),
                   (upsilon * sigma_gain + phi_rhs).cwiseAbs().maxCoeff());
    }
  }
  return sol;
}

FGHCoefficients extract_fgh(const GameSpec& spec, const RiccatiSolution& sol) {
  const auto [n, m, l, N] = spec.dims;
  const ScenarioTree& tree = spec.tree;
  const Eigen::VectorXd zero_phi = Eigen::VectorXd::Zero(2 * n);

  FGHCoefficients out;
  out.f = make_family(tree, 0, N - 1, 2 * n, 1);
  out.g = make_family(tree, 0, N - 1, 2 * n, 2 * n);
  out.h = make_family(tree, 0, N - 1, 2 * n, 2 * n);

  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const CompactCoefficients cc = assemble_node(spec, k, j);
      RiccatiOperands ops = sol.diagnostics.at(k).at(j).operands;

      const Eigen::MatrixXd upsilon = op_upsilon(cc, ops);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(upsilon);
      const double rcond = reciprocal_condition(lu, upsilon);
      if (!(rcond > 0.0)) throw SingularUpsilon(k, j, rcond);
      const Eigen::MatrixXd l_t = op_l_transpose(cc, ops);

      // Inhomogeneous parts: the operators with the phi moments removed.
      ops.Ephi = zero_phi;
      ops.Ephiw = zero_phi;
      const Eigen::VectorXd theta0 = op_theta(cc, ops, cc.b, cc.sigma);
      const Eigen::VectorXd phi0 = op_phi(cc, ops, cc.b, cc.sigma);

      out.f[k].values[j] = theta0 - l_t * lu.solve(phi0);
      out.g[k].values[j] =
          cc.Atilde.transpose() - l_t * lu.solve(cc.Lambda1.transpose());
      out.h[k].values[j] =
          cc.Dtilde.transpose() - l_t * lu.solve(cc.Lambda3.transpose());
    }
  }
  return out;
}

std::vector<std::string> riccati_advisories(const GameSpec& spec) {
  std::vector<std::string> warnings;
  const auto [n, m, l, N] = spec.dims;

  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < spec.tree.level_size(k); ++j) {
      Eigen::MatrixXd lambda7 = Eigen::MatrixXd::Zero(m + l, m + l);
      lambda7.topLeftCorner(m, m) = spec.costs.R[k].values[j];
      lambda7.bottomRightCorner(l, l) = spec.costs.S[k].values[j];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          0.5 * (lambda7 + lambda7.transpose()), Eigen::EigenvaluesOnly);
      if (!(eig.eigenvalues().minCoeff() > 0.0)) {
        warnings.push_back("control weight block not positive definite at level " +
                           std::to_string(k) + ", node " + std::to_string(j));
      }
    }
  }
  for (int j = 0; j < spec.tree.level_size(N); ++j) {
    for (const TreeProcess* term : {&spec.costs.G_N, &spec.costs.H_N}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          0.5 * (term->values[j] + term->values[j].transpose()), Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() < 0.0) {
        warnings.push_back("terminal weight block indefinite at node " + std::to_string(j));
        break;
      }
    }
  }
  return warnings;
}

}  // namespace lqnash
