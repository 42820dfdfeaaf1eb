#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqnash/filtration.hpp"

namespace lqnash {

struct Dims {
  int n = 1;  // state
  int m = 1;  // player-1 control
  int l = 1;  // player-2 control
  int N = 1;  // horizon

  bool operator==(const Dims&) const = default;
};

// State dynamics
//   x_{k+1} = A x_k + B u_k + C v_k + b + (D x_k + E u_k + F v_k + sigma) w_k.
// Each family holds one process per level 0..N-1 (time-k data on level-k
// nodes).
struct DynamicsCoefficients {
  TreeProcessFamily A, B, C, D, E, F;  // n x n, n x m, n x l, n x n, n x m, n x l
  TreeProcessFamily b, sigma;          // n-vectors
};

// Running weights of both quadratic cost functionals plus terminal weights.
// Player 1: Q, L, R, q, rho and terminal G_N, g_N. Player 2: P, M, S, p,
// theta and terminal H_N, h_N. Terminal data lives on level-N nodes.
struct CostCoefficients {
  TreeProcessFamily Q, L, R;  // n x n, m x n, m x m
  TreeProcessFamily q, rho;   // n, m
  TreeProcessFamily P, M, S;  // n x n, l x n, l x l
  TreeProcessFamily p, theta; // n, l
  TreeProcess G_N, g_N;       // n x n, n
  TreeProcess H_N, h_N;       // n x n, n
};

struct GameSpec {
  Dims dims;
  ScenarioTree tree;
  DynamicsCoefficients dynamics;
  CostCoefficients costs;
  Eigen::VectorXd xi;  // initial state
};

struct ControlPair {
  TreeProcessFamily u;  // m-vectors, levels 0..N-1
  TreeProcessFamily v;  // l-vectors, levels 0..N-1
};

struct ValidationEntry {
  std::string check;
  int level = 0;
  int node = 0;
  bool pass = true;
  double value = 0.0;  // offending eigenvalue or norm
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool passed() const;
  std::vector<ValidationEntry> failures() const;
};

/// Checks structural completeness, the symmetry of all weight matrices
/// (tolerance 1e-12), R >= delta I and S >= delta I, positive semidefinite
/// terminal weights, and the Schur-complement conditions
/// Q - L^T R^-1 L >= 0 and P - M^T S^-1 M >= 0 (eigenvalue floor -1e-10).
/// Failures are report entries, never exceptions.
ValidationReport validate(const GameSpec& spec, double delta);

/// Deterministic random instance that passes validate(., 1.0) by
/// construction: free coefficients uniform in [-magnitude, magnitude],
/// R = I + WW^T, S = I + WW^T, Q = L^T R^-1 L + WW^T, P = M^T S^-1 M + WW^T,
/// G_N = WW^T, H_N = WW^T.
GameSpec generate_random(const Dims& dims, const ScenarioTree& tree, std::uint64_t seed,
                         double magnitude = 1.0);

/// Copy with all noise channels removed (D = E = F = sigma = 0) and every
/// coefficient replaced by its root-path value, i.e. constant across each
/// level. The result behaves like a deterministic game.
GameSpec zero_noise_reduction(const GameSpec& spec);

/// Zero control pair of the right shapes.
ControlPair zero_controls(const GameSpec& spec);

}  // namespace lqnash
