#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lqnash/errors.hpp"

namespace lqnash {

// One noise outcome at a node: realized value and conditional probability.
// The child reached under outcome i of node v is node v.first_child + i at
// the next level.
struct Branch {
  double omega = 0.0;
  double prob = 0.0;
};

struct TreeNode {
  int parent = -1;       // node index at the previous level; -1 at the root
  int first_child = -1;  // node index at the next level; -1 at leaves
  std::vector<Branch> branches;
  double prob = 1.0;     // unconditional path probability
};

/// Finite filtration realized as a rooted scenario tree.
///
/// Level-k nodes enumerate the noise histories (w_0, ..., w_{k-1}); level 0
/// holds the single root. A quantity measurable with respect to the history
/// up to time k-1 is stored as one value per level-k node, so conditional
/// expectations become exact finite sums over branches.
///
/// Every non-leaf node carries a branch distribution with conditional mean 0
/// and conditional variance 1 (checked to 1e-12 at construction). Fourth
/// moments are finite automatically and are exposed as a diagnostic.
class ScenarioTree {
 public:
  ScenarioTree() = default;

  int horizon() const { return horizon_; }
  int num_levels() const { return horizon_ + 1; }
  int level_size(int level) const { return static_cast<int>(levels_.at(level).size()); }
  const std::vector<TreeNode>& level(int lev) const { return levels_.at(lev); }
  const TreeNode& node(int level, int index) const { return levels_.at(level).at(index); }

  /// Branch-index path from the root, components joined by '.'; the root
  /// itself has the empty path.
  std::string node_path(int level, int index) const;

  /// Inverse of node_path; throws InvalidSpec on unknown paths.
  std::pair<int, int> find_path(const std::string& path) const;

  /// Conditional fourth moment sum p_i w_i^4 at a non-leaf node (diagnostic).
  double fourth_moment(int level, int index) const;
  double max_fourth_moment() const;

  /// Name of the preset used to build the tree, empty for explicit branches.
  const std::string& preset() const { return preset_; }
  /// The per-level branch distributions the tree was built from.
  const std::vector<std::vector<Branch>>& level_branches() const { return level_spec_; }

  friend ScenarioTree build_tree(int horizon, const std::vector<std::vector<Branch>>& per_level);
  friend ScenarioTree build_tree(int horizon, const std::string& preset);

 private:
  int horizon_ = 0;
  std::vector<std::vector<TreeNode>> levels_;  // levels_[k], k = 0..horizon
  std::string preset_;
  std::vector<std::vector<Branch>> level_spec_;
};

/// Builds a tree whose nodes at level k all share the k-th branch
/// distribution. Throws InvalidSpec / MomentViolation if a distribution
/// breaks the probability or moment constraints.
ScenarioTree build_tree(int horizon, const std::vector<std::vector<Branch>>& per_level);

/// Preset trees; "rademacher" gives outcomes +1/-1 with probability 1/2 at
/// every node.
ScenarioTree build_tree(int horizon, const std::string& preset = "rademacher");

enum class Weight { One, Omega, OmegaSq };

/// Values attached to every node of one level, all with a common shape.
struct TreeProcess {
  int level = 0;
  std::vector<Eigen::MatrixXd> values;

  TreeProcess() = default;
  TreeProcess(int lev, std::vector<Eigen::MatrixXd> vals) : level(lev), values(std::move(vals)) {}

  Eigen::Index rows() const { return values.empty() ? 0 : values.front().rows(); }
  Eigen::Index cols() const { return values.empty() ? 0 : values.front().cols(); }

  const Eigen::MatrixXd& at(int node) const { return values.at(node); }
  Eigen::MatrixXd& at(int node) { return values.at(node); }
};

/// A process over a contiguous range of levels; indexed by level.
using TreeProcessFamily = std::vector<TreeProcess>;

/// Zero-initialized process on every node of `level`.
TreeProcess make_process(const ScenarioTree& tree, int level, Eigen::Index rows, Eigen::Index cols = 1);

/// Zero-initialized family covering levels [first_level, last_level].
TreeProcessFamily make_family(const ScenarioTree& tree, int first_level, int last_level,
                              Eigen::Index rows, Eigen::Index cols = 1);

/// Throws unless z sits on `level` with one value per node, all of the given
/// shape (shape check skipped when rows < 0).
void check_process(const ScenarioTree& tree, const TreeProcess& z, int level,
                   Eigen::Index rows = -1, Eigen::Index cols = -1);

/// One-step conditional expectation: maps a process at level k+1 to level k.
/// At a node with branches (w_i, p_i) the result is sum_i p_i c_i z(child_i)
/// with c_i = 1, w_i, or w_i^2 according to `weight`.
TreeProcess cond_expect(const ScenarioTree& tree, const TreeProcess& z, Weight weight);

/// Probability-weighted mean over all nodes of the process's level.
Eigen::MatrixXd unconditional_mean(const ScenarioTree& tree, const TreeProcess& z);

}  // namespace lqnash
