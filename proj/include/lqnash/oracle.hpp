#pragma once

#include "lqnash/game.hpp"

namespace lqnash {

// One player's exact cost with the opponent frozen, reduced to a dense
// quadratic over the stacked per-node controls:
//   J(U) = constant0 + gradient0 . U + 1/2 U^T hessian U.
// The hessian is the true second derivative and is assembled purely from
// homogeneous cost evaluations, never from the backward-recursion machinery.
struct StackedQuadratic {
  Player player = Player::One;
  int dim = 0;  // total stacked control dimension M
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient0;
  double constant0 = 0.0;

  struct BlockRef {
    int level = 0;
    int node = 0;
    int offset = 0;  // first stacked index of this node's control block
    int size = 0;
  };
  std::vector<BlockRef> blocks;

  Eigen::VectorXd stack(const TreeProcessFamily& control) const;
  TreeProcessFamily unstack(const GameSpec& spec, const Eigen::VectorXd& stacked) const;

  /// Exact value of the assembled form at a stacked control.
  double evaluate(const Eigen::VectorXd& stacked) const;
};

/// Stacked-control problems larger than this are refused.
inline constexpr int kMaxStackedDim = 512;

/// Reduces the player's problem (opponent fixed) to a StackedQuadratic.
/// constant0 is the cost at zero own control; gradient0 comes from one
/// variational pass per basis direction; the hessian from homogeneous-cost
/// polarization, symmetrized.
StackedQuadratic assemble_quadratic(const GameSpec& spec, const TreeProcessFamily& fixed_other,
                                    Player player);

/// Unique minimizer of the player's exact cost with the opponent frozen,
/// via a positive-definite factorization of the stacked Hessian.
TreeProcessFamily best_response(const GameSpec& spec, const TreeProcessFamily& fixed_other,
                                Player player);

/// Best-response gaps of a candidate control pair: control-space sup-norm
/// distances to each best response and the cost improvements forgone.
NashGaps nash_gap(const GameSpec& spec, const ControlPair& candidate);

}  // namespace lqnash
