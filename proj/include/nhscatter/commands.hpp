#pragma once

// Subcommand implementations behind the nhscatter CLI. Each takes a fully
// parsed RunConfig and writes its report to `out`, diagnostics to `err`, and
// returns the process exit code.

#include <array>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nhscatter/errors.hpp"
#include "nhscatter/report_io.hpp"
#include "nhscatter/scalar.hpp"

namespace nhs::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitEmpty = 2;
inline constexpr int kExitUsage = 64;

/// Inconsistent or missing flags.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class QuantitySelection { transmission, reflection, both };

struct RunConfig {
  std::string subcommand;

  // Barrier.
  double v1 = 0;
  double width = 1;

  // Search.
  std::optional<int> count;
  std::optional<std::array<double, 2>> e_window;
  std::optional<std::array<double, 2>> v_window;
  int grid_e = 600;
  int grid_v = 300;

  // Singularity selection for analyze / contours.
  std::optional<int> ss_index;
  std::optional<double> ss_e;
  std::optional<double> ss_v;
  double residual_gate = 1e-6;  // |m22| allowed at user-given coordinates

  // Contours.
  int levels = 5;
  std::optional<double> level_max;
  double level_step = 0.25;
  std::vector<double> level_list;
  double log_base = std::numbers::e;
  int n_points = 256;
  QuantitySelection quantity = QuantitySelection::both;
  bool plot_script = false;
  std::string output_dir = "contours";

  // Output.
  io::Format format = io::Format::csv;
  std::string output_path;  // empty: standard output
  PrecisionMode precision = PrecisionMode::standard;
  bool timestamp = true;

  /// Throws UsageError when flags contradict each other.
  void validate() const;
};

int cmd_find_ss(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_contours(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reproduce_tables(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand; maps library errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace nhs::cli
