#pragma once

#include <optional>

#include "lqnash/riccati.hpp"

namespace lqnash {

enum class Player { One, Two };

struct Trajectory {
  TreeProcessFamily x;   // n-vectors, levels 0..N
  ControlPair controls;  // levels 0..N-1
  TreeProcessFamily y1;  // n-vectors, levels 0..N
  TreeProcessFamily y2;
  TreeProcessFamily Y;   // stacked [y1; y2], levels 0..N
};

/// Rolls the state forward from xi under the given controls.
TreeProcessFamily simulate_forward(const GameSpec& spec, const ControlPair& controls);

/// Applies the affine feedback pi = Pi x + Sigma nodewise, rolls the state,
/// splits pi into (u, v) by row blocks, and fills the adjoints.
Trajectory simulate_feedback(const GameSpec& spec, const RiccatiSolution& sol);

struct AdjointSolution {
  TreeProcessFamily y1, y2, Y;
};

/// Backward adjoint pass for a given state/control trajectory:
///   y1_N = G_N x_N + g_N at each leaf, then
///   y1_k = A^T E[y1' | .] + D^T E[y1' w | .] + Q x_k + L^T u_k + q
/// and symmetrically for y2 with P, M, p and terminal H_N, h_N.
AdjointSolution solve_adjoints(const GameSpec& spec, const TreeProcessFamily& x,
                               const ControlPair& controls);

/// Exact expected cost of the chosen player, all cross and linear terms
/// included, evaluated as a probability-weighted finite sum.
double cost(const GameSpec& spec, const ControlPair& controls, Player player);

/// Homogeneous cost of a single-player direction: zero initial state, zero
/// inhomogeneities, the other player's control zero. This is the exact
/// second-order term of the cost expansion.
double cost_homogeneous(const GameSpec& spec, const TreeProcessFamily& direction, Player player);

/// Directional derivative of the player's cost at (u, v) along `direction`,
/// evaluated via the variational state of the homogeneous system.
double gateaux(const GameSpec& spec, const ControlPair& controls,
               const TreeProcessFamily& direction, Player player);

/// State response of the homogeneous system to a single player's control
/// (zero initial state; the other player silent).
TreeProcessFamily variational_state(const GameSpec& spec, const TreeProcessFamily& direction,
                                    Player player);

struct StationarityResiduals {
  TreeProcessFamily r1;  // m-vectors, levels 0..N-1
  TreeProcessFamily r2;  // l-vectors
  double sup1 = 0.0;
  double sup2 = 0.0;
};

/// First-order (stationarity) residuals along a trajectory:
///   r1 = B^T E[y1' | .] + E^T E[y1' w | .] + L x + R u + rho
///   r2 = C^T E[y2' | .] + F^T E[y2' w | .] + M x + S v + theta
StationarityResiduals stationarity_residuals(const GameSpec& spec, const Trajectory& traj);

/// Controls recovered from the adjoints by inverting the stationarity
/// conditions; reproduces the inputs on an equilibrium trajectory.
ControlPair explicit_controls(const GameSpec& spec, const Trajectory& traj);

struct DualityIdentity {
  double lhs = 0.0;  // E<y1_N, xw_N> + E sum <Q x + L^T u + q, xw>
  double rhs = 0.0;  // E sum <B^T E[y1'|.] + E^T E[y1' w|.], w>
  double gap() const;
  double relative_gap() const;
};

/// Summation-by-parts identity between the player-1 adjoint and the
/// variational state of a direction w; holds for any admissible trajectory.
DualityIdentity duality_identity(const GameSpec& spec, const Trajectory& traj,
                                 const TreeProcessFamily& w);
double duality_identity_gap(const GameSpec& spec, const Trajectory& traj,
                            const TreeProcessFamily& w);

struct ClosedLoopResiduals {
  // Sup-norm residuals of the four feedback-consistency conditions, with the
  // per-node worst values alongside.
  double riccati_sup = 0.0;   // T_k - Delta - L^T Pi_k
  double gain_sup = 0.0;      // Gamma + Upsilon Pi_k
  double offset_sup = 0.0;    // phi_k - Theta - L^T Sigma_k
  double consistency_sup = 0.0;  // Phi + Upsilon Sigma_k
  TreeProcessFamily riccati, gain, offset, consistency;  // scalar per node
};

/// Independent nodewise re-check of the backward solution against the four
/// feedback-consistency conditions (gains indexed by the time at which they
/// act).
ClosedLoopResiduals closed_loop_check(const GameSpec& spec, const RiccatiSolution& sol);

struct NashGaps {
  double gap_u = 0.0;
  double gap_v = 0.0;
  double cost_gap_1 = 0.0;
  double cost_gap_2 = 0.0;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct CertifyOptions {
  double residual_tol = 1e-8;
  double nash_gap_tol = 1e-6;
  int gateaux_samples = 16;       // directions per player, fixed seed
  std::uint64_t direction_seed = 0x1db5a9f3c64e217bULL;
};

struct CertificationReport {
  std::vector<CheckResult> checks;
  double residual_tol = 0.0;
  double nash_gap_tol = 0.0;
  // Per-node detail for the residual-style checks.
  TreeProcessFamily stationarity_1, stationarity_2, ansatz;
  std::optional<ClosedLoopResiduals> closed_loop;
  bool passed() const;
  const CheckResult* first_failure() const;
};

/// Full certificate for a backward solution: stationarity, the affine
/// ansatz |Y - T x - phi|, the four closed-loop conditions, the duality
/// identity and directional derivatives on seeded sample directions, and the
/// supplied best-response gaps.
CertificationReport certify(const GameSpec& spec, const RiccatiSolution& sol,
                            const std::optional<NashGaps>& oracle_results,
                            const CertifyOptions& options = {});

/// Reduced certificate for externally supplied controls (no backward
/// solution): stationarity, directional derivatives, duality, best-response
/// gaps.
CertificationReport certify_controls(const GameSpec& spec, const ControlPair& controls,
                                     const std::optional<NashGaps>& oracle_results,
                                     const CertifyOptions& options = {});

/// Seeded sample directions used by certify (adapted, entries in [-1, 1]).
std::vector<TreeProcessFamily> sample_directions(const GameSpec& spec, Player player, int count,
                                                 std::uint64_t seed);

}  // namespace lqnash
