#pragma once

#include "lqnash/model.hpp"

namespace lqnash {

// Stacked two-player coefficients at one node. With n the state dimension
// and (m, l) the control dimensions:
//   Lambda1 = blockdiag(B, C)   2n x (m+l)     Lambda2 = [B C]   n x (m+l)
//   Lambda3 = blockdiag(E, F)   2n x (m+l)     Lambda4 = [E F]   n x (m+l)
//   Lambda5 = [Q; P]            2n x n
//   Lambda6 = blockdiag(L, M)   (m+l) x 2n     Lambda7 = blockdiag(R, S)
//   Atilde  = blockdiag(A, A)   2n x 2n        Dtilde  = blockdiag(D, D)
//   lambda1 = [q; p]            2n             lambda2 = [rho; theta]  m+l
//   stacked_identity = [I_n; I_n]              2n x n
// The node's raw A, D, b, sigma are kept alongside for the operators that
// mix stacked and unstacked quantities.
struct CompactCoefficients {
  Eigen::MatrixXd Lambda1, Lambda2, Lambda3, Lambda4, Lambda5, Lambda6, Lambda7;
  Eigen::MatrixXd Atilde, Dtilde;
  Eigen::VectorXd lambda1, lambda2;
  Eigen::MatrixXd stacked_identity;
  Eigen::MatrixXd A, D;
  Eigen::VectorXd b, sigma;
};

struct CompactTerminal {
  Eigen::MatrixXd G;  // [G_N; H_N], 2n x n
  Eigen::VectorXd g;  // [g_N; h_N], 2n
};

// Per-node stacked coefficients over all levels: at[k][j] for interior
// levels 0..N-1 and terminal[j] on level-N nodes.
struct CompactFamily {
  std::vector<std::vector<CompactCoefficients>> at;
  std::vector<CompactTerminal> terminal;
};

CompactFamily assemble(const GameSpec& spec);
CompactCoefficients assemble_node(const GameSpec& spec, int level, int node);

// The five conditional moments of the next-level solution pair (T, phi)
// consumed by every operator at a node:
//   ET   = E[T']      ETw  = E[T' w]    ETww = E[T' w^2]
//   Ephi = E[phi']    Ephiw = E[phi' w]
struct RiccatiOperands {
  Eigen::MatrixXd ET, ETw, ETww;  // 2n x n
  Eigen::VectorXd Ephi, Ephiw;    // 2n
};

/// Operands for all nodes of `level`, where T and phi sit at level+1.
std::vector<RiccatiOperands> moment_operands(const ScenarioTree& tree, const TreeProcess& T,
                                             const TreeProcess& phi);

// The six building blocks of the backward recursion. Shapes for state
// dimension n and stacked control dimension m+l:
//   op_delta        2n x n
//   op_l_transpose  2n x (m+l)   (transpose of the gain-row operator)
//   op_upsilon      (m+l) x (m+l), generally non-symmetric
//   op_gamma        (m+l) x n
//   op_theta        2n
//   op_phi          m+l
Eigen::MatrixXd op_delta(const CompactCoefficients& cc, const RiccatiOperands& ops);
Eigen::MatrixXd op_l_transpose(const CompactCoefficients& cc, const RiccatiOperands& ops);
Eigen::MatrixXd op_upsilon(const CompactCoefficients& cc, const RiccatiOperands& ops);
Eigen::MatrixXd op_gamma(const CompactCoefficients& cc, const RiccatiOperands& ops);
Eigen::VectorXd op_theta(const CompactCoefficients& cc, const RiccatiOperands& ops,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& sigma);
Eigen::VectorXd op_phi(const CompactCoefficients& cc, const RiccatiOperands& ops,
                       const Eigen::VectorXd& b, const Eigen::VectorXd& sigma);

}  // namespace lqnash
