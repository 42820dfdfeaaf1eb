#include "lqnash/oracle.hpp"

#include <Eigen/Cholesky>

namespace lqnash {

namespace {

ControlPair combine(const TreeProcessFamily& own, const TreeProcessFamily& other,
                    Player player) {
  ControlPair controls;
  if (player == Player::One) {
    controls.u = own;
    controls.v = other;
  } else {
    controls.u = other;
    controls.v = own;
  }
  return controls;
}

}  // namespace

Eigen::VectorXd StackedQuadratic::stack(const TreeProcessFamily& control) const {
  Eigen::VectorXd out(dim);
  for (const BlockRef& block : blocks) {
    out.segment(block.offset, block.size) = control[block.level].values[block.node].col(0);
  }
  return out;
}

TreeProcessFamily StackedQuadratic::unstack(const GameSpec& spec,
                                            const Eigen::VectorXd& stacked) const {
  const int comp = player == Player::One ? spec.dims.m : spec.dims.l;
  TreeProcessFamily out = make_family(spec.tree, 0, spec.dims.N - 1, comp, 1);
  for (const BlockRef& block : blocks) {
    out[block.level].values[block.node] = stacked.segment(block.offset, block.size);
  }
  return out;
}

double StackedQuadratic::evaluate(const Eigen::VectorXd& stacked) const {
  return constant0 + gradient0.dot(stacked) + 0.5 * stacked.dot(hessian * stacked);
}

StackedQuadratic assemble_quadratic(const GameSpec& spec, const TreeProcessFamily& fixed_other,
                                    Player player) {
  const auto [n, m, l, N] = spec.dims;
  const int comp = player == Player::One ? m : l;

  StackedQuadratic quad;
  quad.player = player;
  int offset = 0;
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < spec.tree.level_size(k); ++j) {
      quad.blocks.push_back({k, j, offset, comp});
      offset += comp;
    }
  }
  quad.dim = offset;
  if (quad.dim > kMaxStackedDim) {
    throw ConfigurationError("stacked control dimension " + std::to_string(quad.dim) +
                             " exceeds the oracle cap of " + std::to_string(kMaxStackedDim));
  }

  const TreeProcessFamily zero_own = make_family(spec.tree, 0, N - 1, comp, 1);
  const ControlPair base = combine(zero_own, fixed_other, player);
  quad.constant0 = cost(spec, base, player);

  auto basis_direction = [&](int index) {
    TreeProcessFamily dir = make_family(spec.tree, 0, N - 1, comp, 1);
    const StackedQuadratic::BlockRef& block = quad.blocks[index / comp];
    dir[block.level].values[block.node](index - block.offset, 0) = 1.0;
    return dir;
  };

  quad.gradient0.resize(quad.dim);
  for (int i = 0; i < quad.dim; ++i) {
    quad.gradient0(i) = gateaux(spec, base, basis_direction(i), player);
  }

  // Hessian by polarization of the homogeneous cost: diagonal from single
  // basis directions, off-diagonal from pairs.
  std::vector<double> homogeneous(quad.dim);
  for (int i = 0; i < quad.dim; ++i) {
    homogeneous[i] = cost_homogeneous(spec, basis_direction(i), player);
  }
  quad.hessian.resize(quad.dim, quad.dim);
  for (int i = 0; i < quad.dim; ++i) {
    quad.hessian(i, i) = 2.0 * homogeneous[i];
    for (int j = i + 1; j < quad.dim; ++j) {
      TreeProcessFamily pair = basis_direction(i);
      const StackedQuadratic::BlockRef& block = quad.blocks[j / comp];
      pair[block.level].values[block.node](j - block.offset, 0) += 1.0;
      const double hij = cost_homogeneous(spec, pair, player) - homogeneous[i] - homogeneous[j];
      quad.hessian(i, j) = hij;
      quad.hessian(j, i) = hij;
    }
  }
  quad.hessian = 0.5 * (quad.hessian + quad.hessian.transpose()).eval();
  return quad;
}

TreeProcessFamily best_response(const GameSpec& spec, const TreeProcessFamily& fixed_other,
                                Player player) {
  const StackedQuadratic quad = assemble_quadratic(spec, fixed_other, player);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(quad.hessian);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw IndefiniteHessian("stacked Hessian is not positive definite");
  }
  const Eigen::VectorXd minimizer = ldlt.solve(-quad.gradient0);
  if (!minimizer.allFinite()) {
    throw IndefiniteHessian("stacked Hessian solve produced non-finite values");
  }
  return quad.unstack(spec, minimizer);
}

NashGaps nash_gap(const GameSpec& spec, const ControlPair& candidate) {
  const TreeProcessFamily br_u = best_response(spec, candidate.v, Player::One);
  const TreeProcessFamily br_v = best_response(spec, candidate.u, Player::Two);

  NashGaps gaps;
  for (int k = 0; k < spec.dims.N; ++k) {
    for (int j = 0; j < spec.tree.level_size(k); ++j) {
      gaps.gap_u = std::max(gaps.gap_u, (candidate.u[k].values[j] - br_u[k].values[j])
                                            .cwiseAbs()
                                            .maxCoeff());
      gaps.gap_v = std::max(gaps.gap_v, (candidate.v[k].values[j] - br_v[k].values[j])
                                            .cwiseAbs()
                                            .maxCoeff());
    }
  }

  ControlPair best1 = candidate;
  best1.u = br_u;
  ControlPair best2 = candidate;
  best2.v = br_v;
  gaps.cost_gap_1 = cost(spec, candidate, Player::One) - cost(spec, best1, Player::One);
  gaps.cost_gap_2 = cost(spec, candidate, Player::Two) - cost(spec, best2, Player::Two);
  return gaps;
}

}  // namespace lqnash
