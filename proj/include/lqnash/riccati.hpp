#pragma once

#include "lqnash/compact.hpp"

namespace lqnash {

struct RiccatiNodeDiagnostics {
  double rcond = 0.0;          // reciprocal 1-norm condition of Upsilon
  double gain_residual = 0.0;  // max of |Upsilon Pi + Gamma| and |Upsilon Sigma + Phi|
  RiccatiOperands operands;    // moments the node's operators consumed
};

// Backward solution of the stacked recursion: T (2n x n) and phi (2n) on
// levels 0..N anchored at the stacked terminal weights, feedback gains
// Pi ((m+l) x n) and Sigma (m+l) on levels 0..N-1, with per-node
// conditioning diagnostics.
struct RiccatiSolution {
  TreeProcessFamily T;
  TreeProcessFamily phi;
  TreeProcessFamily Pi;
  TreeProcessFamily Sigma;
  std::vector<std::vector<RiccatiNodeDiagnostics>> diagnostics;  // [level][node], 0..N-1
};

struct SolveOptions {
  double rcond_min = 1e-10;
  // Positivity margin used by the internal assumption re-check; solving only
  // needs some delta > 0 to exist, so the default is loose.
  double assumption_delta = 1e-8;
  bool check_assumptions = true;
};

/// Backward pass: from T_N = [G_N; H_N], phi_N = [g_N; h_N] down to level 0.
/// At each node, with the moment operands of (T', phi'):
///   Pi    = -Upsilon^-1 Gamma        Sigma = -Upsilon^-1 Phi
///   T     = Delta + L^T Pi           phi   = Theta + L^T Sigma
/// solved by pivoted LU, never by forming Upsilon^-1. Throws SingularUpsilon
/// when the reciprocal condition estimate falls below rcond_min, naming the
/// first failing (level, node).
RiccatiSolution solve_backward(const GameSpec& spec, const SolveOptions& options = {});

// Coefficients of the offset recursion
//   phi_k = f + g E[phi' | .] + h E[phi' w | .]
// at each interior node (f: 2n, g and h: 2n x 2n).
struct FGHCoefficients {
  TreeProcessFamily f;
  TreeProcessFamily g;
  TreeProcessFamily h;
};

/// Reads the offset-recursion coefficients off the solved backward pass:
///   f = Theta_0 - L^T Upsilon^-1 Phi_0     (inhomogeneous parts only)
///   g = At^T - L^T Upsilon^-1 Lambda1^T
///   h = Dt^T - L^T Upsilon^-1 Lambda3^T
/// Feeding them back through the recursion reproduces phi.
FGHCoefficients extract_fgh(const GameSpec& spec, const RiccatiSolution& sol);

/// Non-blocking sufficient-condition screen: warns when some Lambda7 is not
/// positive definite or a terminal weight block has a negative eigenvalue.
std::vector<std::string> riccati_advisories(const GameSpec& spec);

}  // namespace lqnash
