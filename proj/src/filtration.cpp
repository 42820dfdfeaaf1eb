#include "lqnash/filtration.hpp"

#include <cmath>
#include <sstream>

namespace lqnash {

namespace {

constexpr double kMomentTol = 1e-12;

void check_branch_distribution(const std::vector<Branch>& branches, int level) {
  if (branches.size() < 2) {
    throw InvalidSpec("level " + std::to_string(level) + ": every non-leaf node needs at least 2 branches");
  }
  double psum = 0.0, mean = 0.0, var = 0.0;
  for (const Branch& br : branches) {
    if (!(br.prob > 0.0)) {
      throw InvalidSpec("level " + std::to_string(level) + ": branch probabilities must be positive");
    }
    psum += br.prob;
    mean += br.prob * br.omega;
    var += br.prob * br.omega * br.omega;
  }
  if (std::abs(psum - 1.0) > kMomentTol) {
    throw InvalidSpec("level " + std::to_string(level) + ": branch probabilities sum to " + std::to_string(psum));
  }
  if (std::abs(mean) > kMomentTol) {
    throw MomentViolation("level " + std::to_string(level) + ": conditional mean " + std::to_string(mean) + " is not 0");
  }
  if (std::abs(var - 1.0) > kMomentTol) {
    throw MomentViolation("level " + std::to_string(level) + ": conditional variance " + std::to_string(var) + " is not 1");
  }
}

}  // namespace

SingularUpsilon::SingularUpsilon(int level, int node, double rcond)
    : SolverError("gain system singular at level " + std::to_string(level) + ", node " +
                  std::to_string(node) + " (rcond " + std::to_string(rcond) + ")"),
      level_(level),
      node_(node),
      rcond_(rcond) {}

ScenarioTree build_tree(int horizon, const std::vector<std::vector<Branch>>& per_level) {
  if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
  if (static_cast<int>(per_level.size()) != horizon) {
    throw InvalidSpec("expected one branch distribution per level, got " + std::to_string(per_level.size()));
  }
  for (int k = 0; k < horizon; ++k) check_branch_distribution(per_level[k], k);

  ScenarioTree tree;
  tree.horizon_ = horizon;
  tree.level_spec_ = per_level;
  tree.levels_.resize(horizon + 1);
  tree.levels_[0].push_back(TreeNode{});

  for (int k = 0; k < horizon; ++k) {
    const std::vector<Branch>& spec = per_level[k];
    const int width = static_cast<int>(spec.size());
    std::vector<TreeNode>& parents = tree.levels_[k];
    std::vector<TreeNode>& children = tree.levels_[k + 1];
    children.resize(parents.size() * width);
    for (int j = 0; j < static_cast<int>(parents.size()); ++j) {
      parents[j].branches = spec;
      parents[j].first_child = j * width;
      for (int i = 0; i < width; ++i) {
        TreeNode& child = children[j * width + i];
        child.parent = j;
        child.prob = parents[j].prob * spec[i].prob;
      }
    }
  }
  return tree;
}

ScenarioTree build_tree(int horizon, const std::string& preset) {
  if (preset == "rademacher") {
    std::vector<std::vector<Branch>> per_level(
        horizon < 0 ? 0 : horizon, std::vector<Branch>{{1.0, 0.5}, {-1.0, 0.5}});
    ScenarioTree tree = build_tree(horizon, per_level);
    tree.preset_ = preset;
    return tree;
  }
  throw InvalidSpec("unknown tree preset '" + preset + "'");
}

std::string ScenarioTree::node_path(int level, int index) const {
  std::vector<int> steps;
  int lev = level, idx = index;
  while (lev > 0) {
    const TreeNode& cur = levels_.at(lev).at(idx);
    const TreeNode& par = levels_.at(lev - 1).at(cur.parent);
    steps.push_back(idx - par.first_child);
    idx = cur.parent;
    --lev;
  }
  std::ostringstream out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it != steps.rbegin()) out << '.';
    out << *it;
  }
  return out.str();
}

std::pair<int, int> ScenarioTree::find_path(const std::string& path) const {
  if (path.empty()) return {0, 0};
  int level = 0, index = 0;
  std::istringstream in(path);
  std::string component;
  while (std::getline(in, component, '.')) {
    std::size_t used = 0;
    int step = -1;
    try {
      step = std::stoi(component, &used);
    } catch (const std::exception&) {
      throw InvalidSpec("bad node path '" + path + "'");
    }
    if (used != component.size() || step < 0) throw InvalidSpec("bad node path '" + path + "'");
    if (level >= horizon_) throw InvalidSpec("node path '" + path + "' is deeper than the tree");
    const TreeNode& cur = levels_[level][index];
    if (step >= static_cast<int>(cur.branches.size())) {
      throw InvalidSpec("node path '" + path + "' leaves the tree at level " + std::to_string(level));
    }
    index = cur.first_child + step;
    ++level;
  }
  return {level, index};
}

double ScenarioTree::fourth_moment(int level, int index) const {
  const TreeNode& v = node(level, index);
  double m4 = 0.0;
  for (const Branch& br : v.branches) m4 += br.prob * br.omega * br.omega * br.omega * br.omega;
  return m4;
}

double ScenarioTree::max_fourth_moment() const {
  double m4 = 0.0;
  for (int k = 0; k < horizon_; ++k) {
    for (int j = 0; j < level_size(k); ++j) m4 = std::max(m4, fourth_moment(k, j));
  }
  return m4;
}

TreeProcess make_process(const ScenarioTree& tree, int level, Eigen::Index rows, Eigen::Index cols) {
  TreeProcess z;
  z.level = level;
  z.values.assign(tree.level_size(level), Eigen::MatrixXd::Zero(rows, cols));
  return z;
}

TreeProcessFamily make_family(const ScenarioTree& tree, int first_level, int last_level,
                              Eigen::Index rows, Eigen::Index cols) {
  TreeProcessFamily family(last_level + 1);
  for (int k = first_level; k <= last_level; ++k) family[k] = make_process(tree, k, rows, cols);
  return family;
}

void check_process(const ScenarioTree& tree, const TreeProcess& z, int level,
                   Eigen::Index rows, Eigen::Index cols) {
  if (z.level != level) {
    throw LevelMismatch("process at level " + std::to_string(z.level) + ", expected " + std::to_string(level));
  }
  if (level < 0 || level > tree.horizon()) {
    throw LevelMismatch("level " + std::to_string(level) + " outside the tree");
  }
  if (static_cast<int>(z.values.size()) != tree.level_size(level)) {
    throw NonAdaptedProcess("process has " + std::to_string(z.values.size()) + " values, level " +
                            std::to_string(level) + " has " + std::to_string(tree.level_size(level)) + " nodes");
  }
  const Eigen::Index r = rows >= 0 ? rows : z.rows();
  const Eigen::Index c = cols >= 0 ? cols : z.cols();
  for (const Eigen::MatrixXd& value : z.values) {
    if (value.rows() != r || value.cols() != c) {
      throw ShapeMismatch("process values disagree in shape at level " + std::to_string(level));
    }
  }
}

TreeProcess cond_expect(const ScenarioTree& tree, const TreeProcess& z, Weight weight) {
  if (z.level < 1 || z.level > tree.horizon()) {
    throw LevelMismatch("cond_expect needs a process at level 1.." + std::to_string(tree.horizon()) +
                        ", got " + std::to_string(z.level));
  }
  check_process(tree, z, z.level);

  const int out_level = z.level - 1;
  TreeProcess out;
  out.level = out_level;
  out.values.reserve(tree.level_size(out_level));
  for (int j = 0; j < tree.level_size(out_level); ++j) {
    const TreeNode& v = tree.node(out_level, j);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(z.rows(), z.cols());
    for (int i = 0; i < static_cast<int>(v.branches.size()); ++i) {
      const Branch& br = v.branches[i];
      double c = 1.0;
      if (weight == Weight::Omega) c = br.omega;
      else if (weight == Weight::OmegaSq) c = br.omega * br.omega;
      acc.noalias() += (br.prob * c) * z.values[v.first_child + i];
    }
    out.values.push_back(std::move(acc));
  }
  return out;
}

Eigen::MatrixXd unconditional_mean(const ScenarioTree& tree, const TreeProcess& z) {
  check_process(tree, z, z.level);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  for (int j = 0; j < tree.level_size(z.level); ++j) {
    acc.noalias() += tree.node(z.level, j).prob * z.values[j];
  }
  return acc;
}

}  // namespace lqnash
