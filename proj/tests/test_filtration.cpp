#include <doctest.h>

#include <cmath>
#include <random>

#include "lqnash/filtration.hpp"

using namespace lqnash;

namespace {

TreeProcess scalar_process(const ScenarioTree& tree, int level, const std::vector<double>& vals) {
  TreeProcess z = make_process(tree, level, 1, 1);
  REQUIRE(vals.size() == z.values.size());
  for (std::size_t j = 0; j < vals.size(); ++j) z.values[j](0, 0) = vals[j];
  return z;
}

}  // namespace

TEST_CASE("rademacher preset builds the expected shape") {
  const ScenarioTree tree = build_tree(1, "rademacher");
  CHECK(tree.horizon() == 1);
  CHECK(tree.level_size(0) == 1);
  CHECK(tree.level_size(1) == 2);
  CHECK(tree.node(0, 0).branches[0].omega == 1.0);
  CHECK(tree.node(0, 0).branches[1].omega == -1.0);
  CHECK(tree.node(0, 0).branches[0].prob == 0.5);
  CHECK(tree.fourth_moment(0, 0) == 1.0);
}

TEST_CASE("two-step rademacher tree has uniform leaf probabilities") {
  const ScenarioTree tree = build_tree(2, "rademacher");
  CHECK(tree.level_size(0) + tree.level_size(1) + tree.level_size(2) == 7);
  for (int j = 0; j < 4; ++j) CHECK(tree.node(2, j).prob == 0.25);
}

TEST_CASE("three-point branch distribution with matching moments is accepted") {
  const double s = std::sqrt(2.0);
  const std::vector<std::vector<Branch>> spec{{{-s, 0.25}, {0.0, 0.5}, {s, 0.25}}};
  const ScenarioTree tree = build_tree(1, spec);
  CHECK(tree.level_size(1) == 3);
  CHECK(tree.fourth_moment(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("moment and probability violations are rejected") {
  CHECK_THROWS_AS(build_tree(1, std::vector<std::vector<Branch>>{{{1.0, 0.5}, {-0.5, 0.5}}}),
                  MomentViolation);  // mean 0.25
  CHECK_THROWS_AS(build_tree(1, std::vector<std::vector<Branch>>{{{2.0, 0.5}, {-2.0, 0.5}}}),
                  MomentViolation);  // variance 4
  CHECK_THROWS_AS(build_tree(1, std::vector<std::vector<Branch>>{{{1.0, 0.7}, {-1.0, 0.7}}}),
                  InvalidSpec);  // probabilities sum to 1.4
  CHECK_THROWS_AS(build_tree(1, std::vector<std::vector<Branch>>{{{1.0, 1.0}, {-1.0, 0.0}}}),
                  InvalidSpec);  // zero-probability branch
  CHECK_THROWS_AS(build_tree(1, std::vector<std::vector<Branch>>{{{0.0, 1.0}}}),
                  InvalidSpec);  // single branch
  CHECK_THROWS_AS(build_tree(0, "rademacher"), InvalidSpec);
  CHECK_THROWS_AS(build_tree(2, "cauchy"), InvalidSpec);
}

TEST_CASE("node paths round-trip") {
  const ScenarioTree tree = build_tree(3, "rademacher");
  CHECK(tree.node_path(0, 0) == "");
  CHECK(tree.node_path(3, 5) == "1.0.1");
  for (int k = 0; k <= 3; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      CHECK(tree.find_path(tree.node_path(k, j)) == std::pair<int, int>{k, j});
    }
  }
  CHECK_THROWS_AS(tree.find_path("0.0.0.0"), InvalidSpec);
  CHECK_THROWS_AS(tree.find_path("2"), InvalidSpec);
  CHECK_THROWS_AS(tree.find_path("x"), InvalidSpec);
}

TEST_CASE("conditional expectation weights on a binary node") {
  const ScenarioTree tree = build_tree(1, "rademacher");
  const TreeProcess z = scalar_process(tree, 1, {3.0, 1.0});
  CHECK(cond_expect(tree, z, Weight::One).values[0](0, 0) == 2.0);
  CHECK(cond_expect(tree, z, Weight::Omega).values[0](0, 0) == 1.0);
  CHECK(cond_expect(tree, z, Weight::OmegaSq).values[0](0, 0) == 2.0);
}

TEST_CASE("conditional expectation weights on a three-point node") {
  const double s = std::sqrt(2.0);
  const ScenarioTree tree =
      build_tree(1, std::vector<std::vector<Branch>>{{{-s, 0.25}, {0.0, 0.5}, {s, 0.25}}});
  const TreeProcess z = scalar_process(tree, 1, {4.0, 1.0, 0.0});
  CHECK(cond_expect(tree, z, Weight::One).values[0](0, 0) == doctest::Approx(1.5));
  CHECK(cond_expect(tree, z, Weight::Omega).values[0](0, 0) == doctest::Approx(-s));
  CHECK(cond_expect(tree, z, Weight::OmegaSq).values[0](0, 0) == doctest::Approx(2.0));
}

TEST_CASE("constant processes collapse under each weight") {
  const ScenarioTree tree = build_tree(3, "rademacher");
  for (int level = 1; level <= 3; ++level) {
    TreeProcess z = make_process(tree, level, 2, 2);
    for (auto& value : z.values) value << 3.25, -1.5, 0.0, 7.0;
    const TreeProcess one = cond_expect(tree, z, Weight::One);
    const TreeProcess omega = cond_expect(tree, z, Weight::Omega);
    const TreeProcess omsq = cond_expect(tree, z, Weight::OmegaSq);
    for (int j = 0; j < tree.level_size(level - 1); ++j) {
      CHECK((one.values[j] - z.values[0]).cwiseAbs().maxCoeff() == 0.0);
      CHECK(omega.values[j].cwiseAbs().maxCoeff() == 0.0);
      CHECK((omsq.values[j] - z.values[0]).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("path probabilities sum to one on every level") {
  const double s = std::sqrt(2.0);
  const std::vector<std::vector<Branch>> spec{
      {{1.0, 0.5}, {-1.0, 0.5}},
      {{-s, 0.25}, {0.0, 0.5}, {s, 0.25}},
  };
  const ScenarioTree tree = build_tree(2, spec);
  for (int level = 0; level <= 2; ++level) {
    double total = 0.0;
    for (int j = 0; j < tree.level_size(level); ++j) total += tree.node(level, j).prob;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("tower property: repeated averaging hits the unconditional mean") {
  const double s = std::sqrt(2.0);
  const std::vector<std::vector<Branch>> spec{
      {{1.0, 0.5}, {-1.0, 0.5}},
      {{-s, 0.25}, {0.0, 0.5}, {s, 0.25}},
      {{1.0, 0.5}, {-1.0, 0.5}},
  };
  const ScenarioTree tree = build_tree(3, spec);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  TreeProcess z = make_process(tree, 3, 2, 1);
  for (auto& value : z.values) {
    value(0, 0) = dist(rng);
    value(1, 0) = dist(rng);
  }
  const Eigen::MatrixXd mean = unconditional_mean(tree, z);

  TreeProcess folded = z;
  for (int level = 3; level > 0; --level) folded = cond_expect(tree, folded, Weight::One);
  CHECK((folded.values[0] - mean).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("conditional expectation is linear") {
  const ScenarioTree tree = build_tree(2, "rademacher");
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    TreeProcess z1 = make_process(tree, 2, 2, 2);
    TreeProcess z2 = make_process(tree, 2, 2, 2);
    for (int j = 0; j < tree.level_size(2); ++j) {
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          z1.values[j](r, c) = dist(rng);
          z2.values[j](r, c) = dist(rng);
        }
      }
    }
    const double a = dist(rng), b = dist(rng);
    TreeProcess mix = make_process(tree, 2, 2, 2);
    for (int j = 0; j < tree.level_size(2); ++j) {
      mix.values[j] = a * z1.values[j] + b * z2.values[j];
    }
    for (const Weight w : {Weight::One, Weight::Omega, Weight::OmegaSq}) {
      const TreeProcess lhs = cond_expect(tree, mix, w);
      const TreeProcess r1 = cond_expect(tree, z1, w);
      const TreeProcess r2 = cond_expect(tree, z2, w);
      for (int j = 0; j < tree.level_size(1); ++j) {
        CHECK((lhs.values[j] - a * r1.values[j] - b * r2.values[j]).cwiseAbs().maxCoeff() <=
              1e-12);
      }
    }
  }
}

TEST_CASE("cond_expect rejects wrong levels and shapes") {
  const ScenarioTree tree = build_tree(2, "rademacher");
  TreeProcess root = make_process(tree, 0, 1, 1);
  CHECK_THROWS_AS(cond_expect(tree, root, Weight::One), LevelMismatch);

  TreeProcess ragged = make_process(tree, 2, 1, 1);
  ragged.values[1].resize(2, 1);
  CHECK_THROWS_AS(cond_expect(tree, ragged, Weight::One), ShapeMismatch);

  TreeProcess short_process = make_process(tree, 2, 1, 1);
  short_process.values.pop_back();
  CHECK_THROWS_AS(cond_expect(tree, short_process, Weight::One), NonAdaptedProcess);
}
