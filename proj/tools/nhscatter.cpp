// nhscatter: spectral singularities of complex rectangular barriers.

#include <algorithm>
#include <array>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhscatter/commands.hpp"

namespace {

using nhs::cli::RunConfig;

std::optional<std::array<double, 2>> parse_window(const std::string& text, const char* flag) {
  if (text.empty()) {
    return std::nullopt;
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw nhs::cli::UsageError(std::string(flag) + " expects lo:hi");
  }
  try {
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    const std::string lo = text.substr(0, colon);
    const std::string hi = text.substr(colon + 1);
    std::array<double, 2> w{std::stod(lo, &used_lo), std::stod(hi, &used_hi)};
    if (used_lo != lo.size() || used_hi != hi.size()) {
      throw std::invalid_argument(text);
    }
    return w;
  } catch (const std::logic_error&) {
    throw nhs::cli::UsageError(std::string(flag) + " expects numbers as lo:hi, got '" + text + "'");
  }
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> levels;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      levels.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw nhs::cli::UsageError("--level-list expects comma-separated numbers, got '" + text + "'");
    }
    start = comma + 1;
  }
  return levels;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral singularities and self-similar contours of complex rectangular barriers",
               "nhscatter"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file (flags take precedence)");
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "Print the effective configuration and exit")
      ->configurable(false);

  RunConfig config;
  std::string e_window;
  std::string v_window;
  std::string level_list;
  std::string quantity = "both";
  std::string format = "csv";
  std::string precision = "standard";
  bool no_timestamp = false;

  app.add_option("--width", config.width, "Barrier width b")->capture_default_str();
  app.add_option("--v1", config.v1, "Real part of the barrier height")->capture_default_str();
  app.add_option("--count", config.count, "Number of singularities to enumerate");
  app.add_option("--e-window", e_window, "Energy search window lo:hi");
  app.add_option("--v-window", v_window, "Imaginary-height search window lo:hi");
  app.add_option("--grid-e", config.grid_e, "Scan grid points along E")->capture_default_str();
  app.add_option("--grid-v", config.grid_v, "Scan grid points along V")->capture_default_str();
  app.add_option("--ss-index", config.ss_index, "1-based singularity index");
  app.add_option("--e", config.ss_e, "Singularity energy");
  app.add_option("--v", config.ss_v, "Singularity imaginary height");
  app.add_option("--residual-gate", config.residual_gate, "Largest |m22| accepted at --e/--v")
      ->capture_default_str();
  app.add_option("--levels", config.levels, "Number of contour levels")->capture_default_str();
  app.add_option("--level-max", config.level_max, "Highest contour level (log T)");
  app.add_option("--level-step", config.level_step, "Spacing between contour levels")
      ->capture_default_str();
  app.add_option("--level-list", level_list, "Explicit contour levels, comma separated");
  app.add_option("--log-base", config.log_base, "Logarithm base of the levels (default e)")
      ->default_str("2.718281828459045");
  app.add_option("--points", config.n_points, "Rays per contour")->capture_default_str();
  app.add_option("--quantity", quantity, "T, R or both")
      ->check(CLI::IsMember({"T", "R", "both"}))
      ->capture_default_str();
  app.add_flag("--plot-script", config.plot_script, "Also write a gnuplot script");
  app.add_option("--output-dir", config.output_dir, "Directory for contour files")
      ->capture_default_str();
  app.add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", config.output_path, "Write the report to a file");
  app.add_option("--precision", precision, "standard or extended")
      ->check(CLI::IsMember({"standard", "extended"}))
      ->capture_default_str();
  app.add_flag("--no-timestamp", no_timestamp, "Omit generation timestamps");

  for (const auto& [name, help] : std::map<std::string, std::string>{
           {"find-ss", "Locate spectral singularities"},
           {"analyze", "Local conic coefficients at one singularity"},
           {"contours", "Trace constant T/R contours and fit ellipses"},
           {"reproduce-tables", "Recompute the reference tables and diff them"}}) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nhs::cli::kExitUsage;
  }

  if (dump_config) {
    std::cout << "# subcommand: " << app.get_subcommands().front()->get_name() << '\n'
              << app.config_to_str(true, true);
    return nhs::cli::kExitSuccess;
  }

  try {
    config.subcommand = app.get_subcommands().front()->get_name();
    config.e_window = parse_window(e_window, "--e-window");
    config.v_window = parse_window(v_window, "--v-window");
    config.level_list = parse_levels(level_list);
  } catch (const nhs::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return nhs::cli::kExitUsage;
  }
  config.quantity = quantity == "T"   ? nhs::cli::QuantitySelection::transmission
                    : quantity == "R" ? nhs::cli::QuantitySelection::reflection
                                      : nhs::cli::QuantitySelection::both;
  config.format = format == "json" ? nhs::io::Format::json : nhs::io::Format::csv;
  config.precision =
      precision == "extended" ? nhs::PrecisionMode::extended : nhs::PrecisionMode::standard;
  config.timestamp = !no_timestamp;

  return nhs::cli::run(config, std::cout, std::cerr);
}
