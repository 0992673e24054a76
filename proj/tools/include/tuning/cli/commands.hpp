#pragma once

#include "tuning/optimizer.hpp"
#include "tuning/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace tuning::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnstable = 2;

/// "%#.12g": twelve significant digits, trailing zeros kept.
std::string format_report(double v);
/// "%.12g": twelve significant digits, shortest form.
std::string format_csv(double v);

struct CommonFlags {
  bool allow_unstable = false;
};

struct SimulateFlags {
  std::size_t cycles = 100000;
  std::uint64_t seed = 1;
  HoldingTimeLaw law = HoldingTimeLaw::DeterministicMean;
};

// Each command writes its report to `out` and diagnostics to `err`, and
// returns the process exit status: 0 success, 2 unstable model, 1 error.

int cmd_validate(const std::filesystem::path& model_path, std::ostream& out, std::ostream& err);

int cmd_evaluate(const std::filesystem::path& model_path,
                 const std::filesystem::path& policy_path, const CommonFlags& flags,
                 std::ostream& out, std::ostream& err);

int cmd_optimize(const std::filesystem::path& model_path, Sense sense, const CommonFlags& flags,
                 std::ostream& out, std::ostream& err);

int cmd_simulate(const std::filesystem::path& model_path,
                 const std::filesystem::path& policy_path, const SimulateFlags& sim,
                 const CommonFlags& flags, std::ostream& out, std::ostream& err);

/// Writes the test-function grid as CSV ("l0,l1,A,B,C", state labels from 2)
/// to out_path, or to `out` when no path is given.
int cmd_surface(const std::filesystem::path& model_path,
                const std::optional<std::filesystem::path>& out_path, const CommonFlags& flags,
                std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one of the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tuning::cli
