#pragma once

#include <optional>
#include <string>

#include "lqnash/json_io.hpp"
#include "lqnash/oracle.hpp"

namespace lqnash::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 1;
inline constexpr int kExitValidationFailed = 2;
inline constexpr int kExitSingularUpsilon = 3;
inline constexpr int kExitCertificationFailed = 4;

struct SolveFlags {
  std::optional<double> rcond_min;
  std::optional<double> residual_tol;
  bool no_certify = false;
  std::string format = "json";  // "json" or "csv"
};

int cmd_validate(const std::string& input_path, std::optional<double> delta);
int cmd_solve(const std::string& input_path, const std::string& output_path,
              const SolveFlags& flags);
int cmd_generate(const Dims& dims, const std::string& preset, std::uint64_t seed, double magnitude,
                 const std::string& output_path);
int cmd_verify(const std::string& input_path, const std::string& controls_path,
               std::optional<double> residual_tol);

}  // namespace lqnash::cli
