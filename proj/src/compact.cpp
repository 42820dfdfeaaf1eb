#include "lqnash/compact.hpp"

namespace lqnash {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace

CompactCoefficients assemble_node(const GameSpec& spec, int level, int node) {
  const auto [n, m, l, N] = spec.dims;
  require(level >= 0 && level < N, "interior level expected");

  const Eigen::MatrixXd& A = spec.dynamics.A[level].values.at(node);
  const Eigen::MatrixXd& B = spec.dynamics.B[level].values.at(node);
  const Eigen::MatrixXd& C = spec.dynamics.C[level].values.at(node);
  const Eigen::MatrixXd& D = spec.dynamics.D[level].values.at(node);
  const Eigen::MatrixXd& E = spec.dynamics.E[level].values.at(node);
  const Eigen::MatrixXd& F = spec.dynamics.F[level].values.at(node);
  require(A.rows() == n && A.cols() == n && B.rows() == n && B.cols() == m &&
              C.rows() == n && C.cols() == l && D.rows() == n && D.cols() == n &&
              E.rows() == n && E.cols() == m && F.rows() == n && F.cols() == l,
          "dynamics coefficient shape");

  CompactCoefficients cc;
  cc.Lambda1 = Eigen::MatrixXd::Zero(2 * n, m + l);
  cc.Lambda1.topLeftCorner(n, m) = B;
  cc.Lambda1.bottomRightCorner(n, l) = C;

  cc.Lambda2.resize(n, m + l);
  cc.Lambda2 << B, C;

  cc.Lambda3 = Eigen::MatrixXd::Zero(2 * n, m + l);
  cc.Lambda3.topLeftCorner(n, m) = E;
  cc.Lambda3.bottomRightCorner(n, l) = F;

  cc.Lambda4.resize(n, m + l);
  cc.Lambda4 << E, F;

  cc.Lambda5.resize(2 * n, n);
  cc.Lambda5 << spec.costs.Q[level].values.at(node), spec.costs.P[level].values.at(node);

  cc.Lambda6 = Eigen::MatrixXd::Zero(m + l, 2 * n);
  cc.Lambda6.topLeftCorner(m, n) = spec.costs.L[level].values.at(node);
  cc.Lambda6.bottomRightCorner(l, n) = spec.costs.M[level].values.at(node);

  cc.Lambda7 = Eigen::MatrixXd::Zero(m + l, m + l);
  cc.Lambda7.topLeftCorner(m, m) = spec.costs.R[level].values.at(node);
  cc.Lambda7.bottomRightCorner(l, l) = spec.costs.S[level].values.at(node);

  cc.Atilde = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  cc.Atilde.topLeftCorner(n, n) = A;
  cc.Atilde.bottomRightCorner(n, n) = A;

  cc.Dtilde = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  cc.Dtilde.topLeftCorner(n, n) = D;
  cc.Dtilde.bottomRightCorner(n, n) = D;

  cc.lambda1.resize(2 * n);
  cc.lambda1 << spec.costs.q[level].values.at(node), spec.costs.p[level].values.at(node);

  cc.lambda2.resize(m + l);
  cc.lambda2 << spec.costs.rho[level].values.at(node), spec.costs.theta[level].values.at(node);

  cc.stacked_identity.resize(2 * n, n);
  cc.stacked_identity << Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n);

  cc.A = A;
  cc.D = D;
  cc.b = spec.dynamics.b[level].values.at(node);
  cc.sigma = spec.dynamics.sigma[level].values.at(node);
  return cc;
}

CompactFamily assemble(const GameSpec& spec) {
  const auto [n, m, l, N] = spec.dims;
  CompactFamily family;
  family.at.resize(N);
  for (int k = 0; k < N; ++k) {
    family.at[k].reserve(spec.tree.level_size(k));
    for (int j = 0; j < spec.tree.level_size(k); ++j) {
      family.at[k].push_back(assemble_node(spec, k, j));
    }
  }

  family.terminal.reserve(spec.tree.level_size(N));
  for (int j = 0; j < spec.tree.level_size(N); ++j) {
    CompactTerminal term;
    term.G.resize(2 * n, n);
    term.G << spec.costs.G_N.values.at(j), spec.costs.H_N.values.at(j);
    term.g.resize(2 * n);
    term.g << spec.costs.g_N.values.at(j), spec.costs.h_N.values.at(j);
    family.terminal.push_back(std::move(term));
  }
  return family;
}

std::vector<RiccatiOperands> moment_operands(const ScenarioTree& tree, const TreeProcess& T,
                                             const TreeProcess& phi) {
  if (phi.level != T.level) throw LevelMismatch("T and phi sit at different levels");
  const TreeProcess ET = cond_expect(tree, T, Weight::One);
  const TreeProcess ETw = cond_expect(tree, T, Weight::Omega);
  const TreeProcess ETww = cond_expect(tree, T, Weight::OmegaSq);
  const TreeProcess Ephi = cond_expect(tree, phi, Weight::One);
  const TreeProcess Ephiw = cond_expect(tree, phi, Weight::Omega);

  std::vector<RiccatiOperands> out(ET.values.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].ET = ET.values[j];
    out[j].ETw = ETw.values[j];
    out[j].ETww = ETww.values[j];
    out[j].Ephi = Ephi.values[j];
    out[j].Ephiw = Ephiw.values[j];
  }
  return out;
}

// Delta = Lambda5 + At^T E[T] A + At^T E[Tw] D + Dt^T E[Tw] A + Dt^T E[Tww] D
Eigen::MatrixXd op_delta(const CompactCoefficients& cc, const RiccatiOperands& ops) {
  require(ops.ET.rows() == cc.Atilde.rows() && ops.ET.cols() == cc.A.cols(), "operand shape");
  return cc.Lambda5 + cc.Atilde.transpose() * (ops.ET * cc.A + ops.ETw * cc.D) +
         cc.Dtilde.transpose() * (ops.ETw * cc.A + ops.ETww * cc.D);
}

// The transposed gain-row operator, read off from the control coefficient of
// the stacked adjoint recursion:
//   L^T = Lambda6^T + At^T (E[T] Lambda2 + E[Tw] Lambda4)
//                   + Dt^T (E[Tw] Lambda2 + E[Tww] Lambda4)
Eigen::MatrixXd op_l_transpose(const CompactCoefficients& cc, const RiccatiOperands& ops) {
  return cc.Lambda6.transpose() +
         cc.Atilde.transpose() * (ops.ET * cc.Lambda2 + ops.ETw * cc.Lambda4) +
         cc.Dtilde.transpose() * (ops.ETw * cc.Lambda2 + ops.ETww * cc.Lambda4);
}

// Upsilon = Lambda7 + Lambda1^T (E[T] Lambda2 + E[Tw] Lambda4)
//                   + Lambda3^T (E[Tw] Lambda2 + E[Tww] Lambda4)
Eigen::MatrixXd op_upsilon(const CompactCoefficients& cc, const RiccatiOperands& ops) {
  return cc.Lambda7 + cc.Lambda1.transpose() * (ops.ET * cc.Lambda2 + ops.ETw * cc.Lambda4) +
         cc.Lambda3.transpose() * (ops.ETw * cc.Lambda2 + ops.ETww * cc.Lambda4);
}

// Gamma = Lambda6 [I; I] + Lambda1^T (E[T] A + E[Tw] D)
//                        + Lambda3^T (E[Tw] A + E[Tww] D)
Eigen::MatrixXd op_gamma(const CompactCoefficients& cc, const RiccatiOperands& ops) {
  return cc.Lambda6 * cc.stacked_identity +
         cc.Lambda1.transpose() * (ops.ET * cc.A + ops.ETw * cc.D) +
         cc.Lambda3.transpose() * (ops.ETw * cc.A + ops.ETww * cc.D);
}

// Theta = lambda1 + At^T (E[T] b + E[Tw] sigma + E[phi])
//                 + Dt^T (E[Tw] b + E[Tww] sigma + E[phi w])
Eigen::VectorXd op_theta(const CompactCoefficients& cc, const RiccatiOperands& ops,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& sigma) {
  return cc.lambda1 + cc.Atilde.transpose() * (ops.ET * b + ops.ETw * sigma + ops.Ephi) +
         cc.Dtilde.transpose() * (ops.ETw * b + ops.ETww * sigma + ops.Ephiw);
}

// Phi = lambda2 + Lambda1^T (E[T] b + E[Tw] sigma + E[phi])
//               + Lambda3^T (E[Tw] b + E[Tww] sigma + E[phi w])
Eigen::VectorXd op_phi(const CompactCoefficients& cc, const RiccatiOperands& ops,
                       const Eigen::VectorXd& b, const Eigen::VectorXd& sigma) {
  return cc.lambda2 + cc.Lambda1.transpose() * (ops.ET * b + ops.ETw * sigma + ops.Ephi) +
         cc.Lambda3.transpose() * (ops.ETw * b + ops.ETww * sigma + ops.Ephiw);
}

}  // namespace lqnash
