#pragma once

#include <Eigen/Dense>

#include "lqnash/model.hpp"

namespace lqnash::testing {

// Scalar two-player game used throughout the suites: one step, symmetric
// unit weights, deterministic dynamics x1 = x0 + u + v from x0 = 1, no noise
// channels or linear cost terms.
inline GameSpec scalar_game() {
  GameSpec spec;
  spec.dims = {1, 1, 1, 1};
  spec.tree = build_tree(1, "rademacher");
  const ScenarioTree& tree = spec.tree;

  auto one = [&](int first, int last) {
    TreeProcessFamily fam = make_family(tree, first, last, 1, 1);
    for (int k = first; k <= last; ++k) {
      for (auto& value : fam[k].values) value(0, 0) = 1.0;
    }
    return fam;
  };
  auto zero = [&](int first, int last) { return make_family(tree, first, last, 1, 1); };

  spec.dynamics.A = one(0, 0);
  spec.dynamics.B = one(0, 0);
  spec.dynamics.C = one(0, 0);
  spec.dynamics.D = zero(0, 0);
  spec.dynamics.E = zero(0, 0);
  spec.dynamics.F = zero(0, 0);
  spec.dynamics.b = zero(0, 0);
  spec.dynamics.sigma = zero(0, 0);

  spec.costs.Q = one(0, 0);
  spec.costs.L = zero(0, 0);
  spec.costs.R = one(0, 0);
  spec.costs.q = zero(0, 0);
  spec.costs.rho = zero(0, 0);
  spec.costs.P = one(0, 0);
  spec.costs.M = zero(0, 0);
  spec.costs.S = one(0, 0);
  spec.costs.p = zero(0, 0);
  spec.costs.theta = zero(0, 0);

  spec.costs.G_N = make_process(tree, 1, 1, 1);
  spec.costs.H_N = make_process(tree, 1, 1, 1);
  for (auto& value : spec.costs.G_N.values) value(0, 0) = 1.0;
  for (auto& value : spec.costs.H_N.values) value(0, 0) = 1.0;
  spec.costs.g_N = make_process(tree, 1, 1, 1);
  spec.costs.h_N = make_process(tree, 1, 1, 1);

  spec.xi = Eigen::VectorXd::Constant(1, 1.0);
  return spec;
}

// Variant with a player-1 noise channel (E = 1) and a leaf-dependent
// player-1 terminal weight 1 + w (2 on the up leaf, 0 on the down leaf).
// Its gain system is non-symmetric.
inline GameSpec noise_coupled_game() {
  GameSpec spec = scalar_game();
  spec.dynamics.E[0].values[0](0, 0) = 1.0;
  spec.costs.G_N.values[0](0, 0) = 2.0;  // leaf 0: w = +1
  spec.costs.G_N.values[1](0, 0) = 0.0;  // leaf 1: w = -1
  return spec;
}

// Hand-solved equilibrium of scalar_game: the two first-order conditions
//   (1 + u + v) + u = 0,  (1 + u + v) + v = 0
// as a 2x2 linear system. Solved here independently of the backward pass.
struct ScalarEquilibrium {
  double u, v, x1, j1, j2;
};
inline ScalarEquilibrium scalar_game_equilibrium() {
  Eigen::Matrix2d lhs;
  lhs << 2.0, 1.0, 1.0, 2.0;
  const Eigen::Vector2d rhs(-1.0, -1.0);
  const Eigen::Vector2d uv = lhs.fullPivLu().solve(rhs);
  ScalarEquilibrium eq;
  eq.u = uv(0);
  eq.v = uv(1);
  eq.x1 = 1.0 + eq.u + eq.v;
  eq.j1 = 0.5 * (eq.x1 * eq.x1 + 1.0 + eq.u * eq.u);
  eq.j2 = 0.5 * (eq.x1 * eq.x1 + 1.0 + eq.v * eq.v);
  return eq;
}

// Hand-solved equilibrium of noise_coupled_game. With a = 1 + u + v the
// state is x1 = a + u w, and the first-order conditions reduce to
//   2a + 3u = 0,  a + v = 0,  a - u - v = 1.
struct NoiseEquilibrium {
  double u, v, drift, j1, y1_0, y2_0;
};
inline NoiseEquilibrium noise_game_equilibrium() {
  Eigen::Matrix3d lhs;
  lhs << 3.0, 0.0, 2.0,   // 3u + 2a = 0
      0.0, 1.0, 1.0,      // v + a = 0
      -1.0, -1.0, 1.0;    // a - u - v = 1
  const Eigen::Vector3d rhs(0.0, 0.0, 1.0);
  const Eigen::Vector3d uva = lhs.fullPivLu().solve(rhs);
  NoiseEquilibrium eq;
  eq.u = uva(0);
  eq.v = uva(1);
  eq.drift = uva(2);
  const double x_up = eq.drift + eq.u, x_down = eq.drift - eq.u;
  eq.j1 = 0.5 * (0.5 * 2.0 * x_up * x_up + 1.0 + eq.u * eq.u);
  // adjoints: y1_0 = E[y1_1] + Q x_0, y1_1 = G_N x_1 (leafwise)
  eq.y1_0 = 0.5 * (2.0 * x_up) + 1.0;
  eq.y2_0 = 0.5 * (x_up + x_down) + 1.0;
  return eq;
}

// One-step game whose gain system is exactly singular at the root while the
// standing assumptions still hold: terminal weights 1 +/- w and control
// channels tuned so the 2x2 system has determinant zero in exact arithmetic
// (all entries are small dyadic rationals).
inline GameSpec singular_upsilon_game() {
  GameSpec spec = scalar_game();
  spec.dynamics.B[0].values[0](0, 0) = 1.5;
  spec.dynamics.E[0].values[0](0, 0) = 0.5;
  spec.dynamics.C[0].values[0](0, 0) = 4.125;
  spec.dynamics.F[0].values[0](0, 0) = 2.125;
  spec.costs.G_N.values[0](0, 0) = 2.0;
  spec.costs.G_N.values[1](0, 0) = 0.0;
  spec.costs.H_N.values[0](0, 0) = 0.0;
  spec.costs.H_N.values[1](0, 0) = 2.0;
  return spec;
}

// Deterministic grid of small random instances used by the agreement suites.
struct InstanceShape {
  int n, m, l, N;
  std::uint64_t seed;
};
inline std::vector<InstanceShape> agreement_instances() {
  std::vector<InstanceShape> shapes;
  std::uint64_t seed = 1;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      for (int l = 1; l <= 3; ++l) {
        if (static_cast<int>(shapes.size()) >= 20) break;
        const int N = 2 + static_cast<int>(seed % 3);
        shapes.push_back({n, m, l, N, seed});
        ++seed;
      }
    }
  }
  // 27 combinations truncated to 20, still covering every n, m, l in 1..3
  // and every N in 2..4.
  shapes.resize(20);
  return shapes;
}

inline GameSpec agreement_instance(const InstanceShape& shape) {
  const ScenarioTree tree = build_tree(shape.N, "rademacher");
  return generate_random({shape.n, shape.m, shape.l, shape.N}, tree, shape.seed, 1.0);
}

}  // namespace lqnash::testing
