#include <doctest.h>

#include <random>

#include "lqnash/compact.hpp"
#include "support/instances.hpp"

using namespace lqnash;
using lqnash::testing::noise_coupled_game;
using lqnash::testing::scalar_game;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd out(2, 2);
  out << a, b, c, d;
  return out;
}

Eigen::MatrixXd col2(double a, double b) {
  Eigen::MatrixXd out(2, 1);
  out << a, b;
  return out;
}

RiccatiOperands random_operands(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto fill = [&](Eigen::MatrixXd& mat, int rows, int cols) {
    mat.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) mat(r, c) = dist(rng);
    }
  };
  RiccatiOperands ops;
  fill(ops.ET, 2 * n, n);
  fill(ops.ETw, 2 * n, n);
  fill(ops.ETww, 2 * n, n);
  Eigen::MatrixXd phi, phiw;
  fill(phi, 2 * n, 1);
  fill(phiw, 2 * n, 1);
  ops.Ephi = phi;
  ops.Ephiw = phiw;
  return ops;
}

}  // namespace

TEST_CASE("block placement of the stacked coefficients") {
  const ScenarioTree tree = build_tree(1, "rademacher");
  GameSpec spec = scalar_game();
  spec.costs.R[0].values[0](0, 0) = 2.0;
  spec.costs.S[0].values[0](0, 0) = 3.0;

  const CompactCoefficients cc = assemble_node(spec, 0, 0);
  CHECK(cc.Lambda7 == mat2(2.0, 0.0, 0.0, 3.0));
  CHECK(cc.Lambda1 == mat2(1.0, 0.0, 0.0, 1.0));  // B = C = 1
  CHECK(cc.Lambda2 == (Eigen::MatrixXd(1, 2) << 1.0, 1.0).finished());
  CHECK(cc.stacked_identity == col2(1.0, 1.0));
  CHECK(cc.Atilde == mat2(1.0, 0.0, 0.0, 1.0));
  (void)tree;
}

TEST_CASE("round-trip extraction of an input block") {
  const ScenarioTree tree = build_tree(2, "rademacher");
  const GameSpec spec = generate_random({2, 2, 1, 2}, tree, 17);
  const CompactFamily family = assemble(spec);
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const CompactCoefficients& cc = family.at[k][j];
      CHECK(cc.Lambda1.topLeftCorner(2, 2) == spec.dynamics.B[k].values[j]);
      CHECK(cc.Lambda1.bottomRightCorner(2, 1) == spec.dynamics.C[k].values[j]);
      CHECK(cc.Lambda1.topRightCorner(2, 1).cwiseAbs().maxCoeff() == 0.0);
      CHECK(cc.Lambda1.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
      CHECK(cc.Lambda6.topLeftCorner(2, 2) == spec.costs.L[k].values[j]);
      CHECK(cc.Lambda7.bottomRightCorner(1, 1) == spec.costs.S[k].values[j]);
    }
  }
}

TEST_CASE("all-zero coefficients give zero blocks and the constant stacked identity") {
  GameSpec spec = scalar_game();
  for (auto family : {&spec.dynamics.A, &spec.dynamics.B, &spec.dynamics.C}) {
    for (auto& process : *family) {
      for (auto& value : process.values) value.setZero();
    }
  }
  for (auto family : {&spec.costs.Q, &spec.costs.R, &spec.costs.P, &spec.costs.S}) {
    for (auto& process : *family) {
      for (auto& value : process.values) value.setZero();
    }
  }
  const CompactCoefficients cc = assemble_node(spec, 0, 0);
  CHECK(cc.Lambda1.cwiseAbs().maxCoeff() == 0.0);
  CHECK(cc.Lambda5.cwiseAbs().maxCoeff() == 0.0);
  CHECK(cc.Lambda7.cwiseAbs().maxCoeff() == 0.0);
  CHECK(cc.stacked_identity == col2(1.0, 1.0));
}

TEST_CASE("operator values on the scalar game at the root") {
  const GameSpec spec = scalar_game();
  const CompactCoefficients cc = assemble_node(spec, 0, 0);

  TreeProcess T1 = make_process(spec.tree, 1, 2, 1);
  T1.values[0] = col2(1.0, 1.0);
  T1.values[1] = col2(1.0, 1.0);
  TreeProcess phi1 = make_process(spec.tree, 1, 2, 1);
  const RiccatiOperands ops = moment_operands(spec.tree, T1, phi1)[0];

  CHECK(ops.ET == col2(1.0, 1.0));
  CHECK(ops.ETw == col2(0.0, 0.0));
  CHECK(ops.ETww == col2(1.0, 1.0));

  CHECK(op_delta(cc, ops) == col2(2.0, 2.0));
  CHECK(op_l_transpose(cc, ops) == mat2(1.0, 1.0, 1.0, 1.0));
  CHECK(op_upsilon(cc, ops) == mat2(2.0, 1.0, 1.0, 2.0));
  CHECK(op_gamma(cc, ops) == col2(1.0, 1.0));
  CHECK(op_theta(cc, ops, cc.b, cc.sigma).cwiseAbs().maxCoeff() == 0.0);
  CHECK(op_phi(cc, ops, cc.b, cc.sigma).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("operator values on the noise-coupled game at the root") {
  const GameSpec spec = noise_coupled_game();
  const CompactCoefficients cc = assemble_node(spec, 0, 0);

  TreeProcess T1 = make_process(spec.tree, 1, 2, 1);
  T1.values[0] = col2(2.0, 1.0);  // up leaf
  T1.values[1] = col2(0.0, 1.0);  // down leaf
  TreeProcess phi1 = make_process(spec.tree, 1, 2, 1);
  const RiccatiOperands ops = moment_operands(spec.tree, T1, phi1)[0];

  CHECK(ops.ET == col2(1.0, 1.0));
  CHECK(ops.ETw == col2(1.0, 0.0));
  CHECK(ops.ETww == col2(1.0, 1.0));

  CHECK(op_upsilon(cc, ops) == mat2(5.0, 2.0, 1.0, 2.0));  // non-symmetric
  CHECK(op_gamma(cc, ops) == col2(2.0, 1.0));
  CHECK(op_l_transpose(cc, ops) == mat2(2.0, 1.0, 1.0, 1.0));
  CHECK(op_delta(cc, ops) == col2(2.0, 2.0));
}

TEST_CASE("operators passthrough the inhomogeneous terms") {
  GameSpec spec = scalar_game();
  spec.costs.q[0].values[0](0, 0) = 1.0;
  spec.costs.p[0].values[0](0, 0) = 2.0;
  spec.costs.rho[0].values[0](0, 0) = 1.0;
  spec.costs.theta[0].values[0](0, 0) = -1.0;
  for (auto family : {&spec.dynamics.A, &spec.dynamics.B, &spec.dynamics.C}) {
    for (auto& process : *family) {
      for (auto& value : process.values) value.setZero();
    }
  }
  const CompactCoefficients cc = assemble_node(spec, 0, 0);
  RiccatiOperands ops;
  ops.ET = ops.ETw = ops.ETww = Eigen::MatrixXd::Zero(2, 1);
  ops.Ephi = ops.Ephiw = Eigen::VectorXd::Zero(2);

  CHECK(op_theta(cc, ops, cc.b, cc.sigma) == col2(1.0, 2.0));
  CHECK(op_phi(cc, ops, cc.b, cc.sigma) == col2(1.0, -1.0));
  CHECK(op_delta(cc, ops) == cc.Lambda5);  // zero dynamics
}

TEST_CASE("operator shapes hold across random dimensions") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 4);
    const int l = 1 + static_cast<int>(rng() % 4);
    const ScenarioTree tree = build_tree(1, "rademacher");
    const GameSpec spec = generate_random({n, m, l, 1}, tree, rng());
    const CompactCoefficients cc = assemble_node(spec, 0, 0);
    const RiccatiOperands ops = random_operands(rng, n);

    CHECK(op_delta(cc, ops).rows() == 2 * n);
    CHECK(op_delta(cc, ops).cols() == n);
    CHECK(op_l_transpose(cc, ops).rows() == 2 * n);
    CHECK(op_l_transpose(cc, ops).cols() == m + l);
    CHECK(op_upsilon(cc, ops).rows() == m + l);
    CHECK(op_upsilon(cc, ops).cols() == m + l);
    CHECK(op_gamma(cc, ops).rows() == m + l);
    CHECK(op_gamma(cc, ops).cols() == n);
    CHECK(op_theta(cc, ops, cc.b, cc.sigma).size() == 2 * n);
    CHECK(op_phi(cc, ops, cc.b, cc.sigma).size() == m + l);
  }
}

TEST_CASE("with zero noise channels the omega operands are inert") {
  const ScenarioTree tree = build_tree(2, "rademacher");
  GameSpec spec = zero_noise_reduction(generate_random({2, 1, 2, 2}, tree, 31));
  const CompactCoefficients cc = assemble_node(spec, 0, 0);

  std::mt19937_64 rng(5);
  RiccatiOperands ops = random_operands(rng, 2);
  RiccatiOperands zeroed = ops;
  zeroed.ETw.setZero();
  zeroed.Ephiw.setZero();
  // level-constant T at the next level means the omega moments vanish; the
  // operators must then coincide with the zeroed-operand evaluation
  ops.ETw.setZero();
  ops.Ephiw.setZero();

  CHECK(op_delta(cc, ops) == op_delta(cc, zeroed));
  CHECK(op_upsilon(cc, ops) == op_upsilon(cc, zeroed));
  CHECK(op_gamma(cc, ops) == op_gamma(cc, zeroed));
  CHECK(op_l_transpose(cc, ops) == op_l_transpose(cc, zeroed));
  CHECK(op_theta(cc, ops, cc.b, cc.sigma) == op_theta(cc, zeroed, cc.b, cc.sigma));
  CHECK(op_phi(cc, ops, cc.b, cc.sigma) == op_phi(cc, zeroed, cc.b, cc.sigma));
}

TEST_CASE("matrix-valued operators are affine in the moment operands") {
  std::mt19937_64 rng(77);
  const ScenarioTree tree = build_tree(1, "rademacher");
  const GameSpec spec = generate_random({2, 2, 2, 1}, tree, 1234);
  const CompactCoefficients cc = assemble_node(spec, 0, 0);

  const RiccatiOperands a = random_operands(rng, 2);
  const RiccatiOperands b = random_operands(rng, 2);
  RiccatiOperands zero = a;
  zero.ET.setZero();
  zero.ETw.setZero();
  zero.ETww.setZero();
  RiccatiOperands sum = a;
  sum.ET = a.ET + b.ET;
  sum.ETw = a.ETw + b.ETw;
  sum.ETww = a.ETww + b.ETww;

  auto affine = [&](auto&& op) {
    const Eigen::MatrixXd lhs = op(cc, sum);
    const Eigen::MatrixXd rhs = op(cc, a) + op(cc, b) - op(cc, zero);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  };
  affine([](const CompactCoefficients& c, const RiccatiOperands& o) { return op_delta(c, o); });
  affine([](const CompactCoefficients& c, const RiccatiOperands& o) { return op_upsilon(c, o); });
  affine([](const CompactCoefficients& c, const RiccatiOperands& o) { return op_gamma(c, o); });
  affine(
      [](const CompactCoefficients& c, const RiccatiOperands& o) { return op_l_transpose(c, o); });
}
