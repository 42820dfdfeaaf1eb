#include "lqnash/model.hpp"

#include <Eigen/Eigenvalues>
#include <random>

namespace lqnash {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kDeltaSlack = 1e-12;
constexpr double kSemidefiniteFloor = -1e-10;

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (sym + sym.transpose()),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& x) { return 0.5 * (x + x.transpose()); }

struct StructureChecker {
  const GameSpec& spec;
  ValidationReport& report;
  bool ok = true;

  void family(const TreeProcessFamily& fam, const char* name, int first, int last,
              Eigen::Index rows, Eigen::Index cols) {
    if (static_cast<int>(fam.size()) < last + 1) {
      report.entries.push_back({std::string(name) + " family incomplete", last, 0, false, 0.0});
      ok = false;
      return;
    }
    for (int k = first; k <= last; ++k) {
      try {
        check_process(spec.tree, fam[k], k, rows, cols);
      } catch (const SolverError&) {
        report.entries.push_back({std::string(name) + " malformed", k, 0, false, 0.0});
        ok = false;
      }
    }
  }

  void terminal(const TreeProcess& z, const char* name, Eigen::Index rows, Eigen::Index cols) {
    try {
      check_process(spec.tree, z, spec.dims.N, rows, cols);
    } catch (const SolverError&) {
      report.entries.push_back({std::string(name) + " malformed", spec.dims.N, 0, false, 0.0});
      ok = false;
    }
  }
};

void check_symmetry(ValidationReport& report, const TreeProcess& z, const char* what, int level) {
  for (int j = 0; j < static_cast<int>(z.values.size()); ++j) {
    const double gap = (z.values[j] - z.values[j].transpose()).norm();
    report.entries.push_back(
        {std::string(what) + " symmetric", level, j, gap <= kSymmetryTol, gap});
  }
}

}  // namespace

bool ValidationReport::passed() const {
  for (const ValidationEntry& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

std::vector<ValidationEntry> ValidationReport::failures() const {
  std::vector<ValidationEntry> out;
  for (const ValidationEntry& e : entries) {
    if (!e.pass) out.push_back(e);
  }
  return out;
}

ValidationReport validate(const GameSpec& spec, double delta) {
  ValidationReport report;
  const auto [n, m, l, N] = spec.dims;

  if (n < 1 || m < 1 || l < 1 || N < 1) {
    report.entries.push_back({"dims positive", 0, 0, false, 0.0});
    return report;
  }
  if (spec.tree.horizon() != N) {
    report.entries.push_back({"tree horizon matches dims", 0, 0, false,
                              static_cast<double>(spec.tree.horizon())});
    return report;
  }
  if (spec.xi.size() != n) {
    report.entries.push_back({"initial state dimension", 0, 0, false,
                              static_cast<double>(spec.xi.size())});
    return report;
  }

  StructureChecker structure{spec, report};
  const int last = N - 1;
  structure.family(spec.dynamics.A, "A", 0, last, n, n);
  structure.family(spec.dynamics.B, "B", 0, last, n, m);
  structure.family(spec.dynamics.C, "C", 0, last, n, l);
  structure.family(spec.dynamics.D, "D", 0, last, n, n);
  structure.family(spec.dynamics.E, "E", 0, last, n, m);
  structure.family(spec.dynamics.F, "F", 0, last, n, l);
  structure.family(spec.dynamics.b, "b", 0, last, n, 1);
  structure.family(spec.dynamics.sigma, "sigma", 0, last, n, 1);
  structure.family(spec.costs.Q, "Q", 0, last, n, n);
  structure.family(spec.costs.L, "L", 0, last, m, n);
  structure.family(spec.costs.R, "R", 0, last, m, m);
  structure.family(spec.costs.q, "q", 0, last, n, 1);
  structure.family(spec.costs.rho, "rho", 0, last, m, 1);
  structure.family(spec.costs.P, "P", 0, last, n, n);
  structure.family(spec.costs.M, "M", 0, last, l, n);
  structure.family(spec.costs.S, "S", 0, last, l, l);
  structure.family(spec.costs.p, "p", 0, last, n, 1);
  structure.family(spec.costs.theta, "theta", 0, last, l, 1);
  structure.terminal(spec.costs.G_N, "G_N", n, n);
  structure.terminal(spec.costs.g_N, "g_N", n, 1);
  structure.terminal(spec.costs.H_N, "H_N", n, n);
  structure.terminal(spec.costs.h_N, "h_N", n, 1);
  if (!structure.ok) return report;

  for (int k = 0; k < N; ++k) {
    check_symmetry(report, spec.costs.Q[k], "Q", k);
    check_symmetry(report, spec.costs.R[k], "R", k);
    check_symmetry(report, spec.costs.P[k], "P", k);
    check_symmetry(report, spec.costs.S[k], "S", k);
  }
  check_symmetry(report, spec.costs.G_N, "G_N", N);
  check_symmetry(report, spec.costs.H_N, "H_N", N);

  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < spec.tree.level_size(k); ++j) {
      const Eigen::MatrixXd& R = spec.costs.R[k].values[j];
      const Eigen::MatrixXd& S = spec.costs.S[k].values[j];
      const Eigen::MatrixXd& L = spec.costs.L[k].values[j];
      const Eigen::MatrixXd& M = spec.costs.M[k].values[j];

      const double r_min = min_eigenvalue(R);
      report.entries.push_back({"R >= delta I", k, j, r_min >= delta - kDeltaSlack, r_min});
      const double s_min = min_eigenvalue(S);
      report.entries.push_back({"S >= delta I", k, j, s_min >= delta - kDeltaSlack, s_min});

      const Eigen::MatrixXd schur1 =
          spec.costs.Q[k].values[j] - L.transpose() * symmetrize(R).ldlt().solve(L);
      const double schur1_min = min_eigenvalue(schur1);
      report.entries.push_back({"Q - L^T R^-1 L >= 0", k, j,
                                schur1_min >= kSemidefiniteFloor && std::isfinite(schur1_min),
                                schur1_min});

      const Eigen::MatrixXd schur2 =
          spec.costs.P[k].values[j] - M.transpose() * symmetrize(S).ldlt().solve(M);
      const double schur2_min = min_eigenvalue(schur2);
      report.entries.push_back({"P - M^T S^-1 M >= 0", k, j,
                                schur2_min >= kSemidefiniteFloor && std::isfinite(schur2_min),
                                schur2_min});
    }
  }

  for (int j = 0; j < spec.tree.level_size(N); ++j) {
    const double g_min = min_eigenvalue(spec.costs.G_N.values[j]);
    report.entries.push_back({"G_N >= 0", N, j, g_min >= kSemidefiniteFloor, g_min});
    const double h_min = min_eigenvalue(spec.costs.H_N.values[j]);
    report.entries.push_back({"H_N >= 0", N, j, h_min >= kSemidefiniteFloor, h_min});
  }

  return report;
}

namespace {

class UniformDraw {
 public:
  UniformDraw(std::uint64_t seed, double magnitude) : rng_(seed), magnitude_(magnitude) {}

  double operator()() {
    const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
    return magnitude_ * (2.0 * unit - 1.0);
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = (*this)();
    }
    return out;
  }

  Eigen::MatrixXd gram(Eigen::Index size) {
    const Eigen::MatrixXd w = matrix(size, size);
    return symmetrize(w * w.transpose());
  }

 private:
  std::mt19937_64 rng_;
  double magnitude_;
};

}  // namespace

GameSpec generate_random(const Dims& dims, const ScenarioTree& tree, std::uint64_t seed,
                         double magnitude) {
  if (!(magnitude > 0.0)) throw InvalidSpec("magnitude must be positive");
  const auto [n, m, l, N] = dims;
  UniformDraw draw(seed, magnitude);

  GameSpec spec;
  spec.dims = dims;
  spec.tree = tree;

  auto fill = [&](TreeProcessFamily& fam, Eigen::Index rows, Eigen::Index cols) {
    fam = make_family(tree, 0, N - 1, rows, cols);
    for (int k = 0; k < N; ++k) {
      for (auto& value : fam[k].values) value = draw.matrix(rows, cols);
    }
  };

  fill(spec.dynamics.A, n, n);
  fill(spec.dynamics.B, n, m);
  fill(spec.dynamics.C, n, l);
  fill(spec.dynamics.D, n, n);
  fill(spec.dynamics.E, n, m);
  fill(spec.dynamics.F, n, l);
  fill(spec.dynamics.b, n, 1);
  fill(spec.dynamics.sigma, n, 1);

  fill(spec.costs.L, m, n);
  fill(spec.costs.q, n, 1);
  fill(spec.costs.rho, m, 1);
  fill(spec.costs.M, l, n);
  fill(spec.costs.p, n, 1);
  fill(spec.costs.theta, l, 1);

  spec.costs.R = make_family(tree, 0, N - 1, m, m);
  spec.costs.S = make_family(tree, 0, N - 1, l, l);
  spec.costs.Q = make_family(tree, 0, N - 1, n, n);
  spec.costs.P = make_family(tree, 0, N - 1, n, n);
  const Eigen::MatrixXd eye_m = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd eye_l = Eigen::MatrixXd::Identity(l, l);
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < tree.level_size(k); ++j) {
      const Eigen::MatrixXd R = eye_m + draw.gram(m);
      const Eigen::MatrixXd S = eye_l + draw.gram(l);
      const Eigen::MatrixXd& L = spec.costs.L[k].values[j];
      const Eigen::MatrixXd& M = spec.costs.M[k].values[j];
      spec.costs.R[k].values[j] = R;
      spec.costs.S[k].values[j] = S;
      spec.costs.Q[k].values[j] = symmetrize(L.transpose() * R.ldlt().solve(L)) + draw.gram(n);
      spec.costs.P[k].values[j] = symmetrize(M.transpose() * S.ldlt().solve(M)) + draw.gram(n);
    }
  }

  spec.costs.G_N = make_process(tree, N, n, n);
  spec.costs.g_N = make_process(tree, N, n, 1);
  spec.costs.H_N = make_process(tree, N, n, n);
  spec.costs.h_N = make_process(tree, N, n, 1);
  for (int j = 0; j < tree.level_size(N); ++j) {
    spec.costs.G_N.values[j] = draw.gram(n);
    spec.costs.g_N.values[j] = draw.matrix(n, 1);
    spec.costs.H_N.values[j] = draw.gram(n);
    spec.costs.h_N.values[j] = draw.matrix(n, 1);
  }

  spec.xi = draw.matrix(n, 1);
  return spec;
}

GameSpec zero_noise_reduction(const GameSpec& spec) {
  GameSpec out = spec;

  auto level_constant = [](TreeProcessFamily& fam) {
    for (TreeProcess& z : fam) {
      if (z.values.empty()) continue;
      const Eigen::MatrixXd root_path = z.values.front();
      for (auto& value : z.values) value = root_path;
    }
  };
  auto zero_out = [](TreeProcessFamily& fam) {
    for (TreeProcess& z : fam) {
      for (auto& value : z.values) value.setZero();
    }
  };
  auto terminal_constant = [](TreeProcess& z) {
    if (z.values.empty()) return;
    const Eigen::MatrixXd root_path = z.values.front();
    for (auto& value : z.values) value = root_path;
  };

  level_constant(out.dynamics.A);
  level_constant(out.dynamics.B);
  level_constant(out.dynamics.C);
  level_constant(out.dynamics.b);
  zero_out(out.dynamics.D);
  zero_out(out.dynamics.E);
  zero_out(out.dynamics.F);
  zero_out(out.dynamics.sigma);

  level_constant(out.costs.Q);
  level_constant(out.costs.L);
  level_constant(out.costs.R);
  level_constant(out.costs.q);
  level_constant(out.costs.rho);
  level_constant(out.costs.P);
  level_constant(out.costs.M);
  level_constant(out.costs.S);
  level_constant(out.costs.p);
  level_constant(out.costs.theta);
  terminal_constant(out.costs.G_N);
  terminal_constant(out.costs.g_N);
  terminal_constant(out.costs.H_N);
  terminal_constant(out.costs.h_N);

  return out;
}

ControlPair zero_controls(const GameSpec& spec) {
  ControlPair controls;
  controls.u = make_family(spec.tree, 0, spec.dims.N - 1, spec.dims.m, 1);
  controls.v = make_family(spec.tree, 0, spec.dims.N - 1, spec.dims.l, 1);
  return controls;
}

}  // namespace lqnash
