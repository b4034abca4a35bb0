#include "nhscatter/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nhscatter/closed_forms.hpp"
#include "nhscatter/finder.hpp"
#include "nhscatter/local_conic.hpp"
#include "nhscatter/reference_values.hpp"
#include "nhscatter/self_similarity.hpp"

namespace nhs::cli {
namespace {

constexpr double kDegrees = 180.0 / std::numbers::pi;

using io::Cell;
using io::Table;

Cell num(double x) { return Cell{x}; }
Cell integer(long long x) { return Cell{static_cast<std::int64_t>(x)}; }
Cell text(std::string s) { return Cell{std::move(s)}; }

bool general_search(const RunConfig& c) {
  return c.v1 != 0.0 || c.e_window.has_value() || c.v_window.has_value();
}

SearchConfig search_config(const RunConfig& c) {
  SearchConfig sc;
  if (c.e_window) {
    sc.e_range = *c.e_window;
  }
  if (c.v_window) {
    sc.v_range = *c.v_window;
  }
  sc.grid_e = c.grid_e;
  sc.grid_v = c.grid_v;
  return sc;
}

ScanTarget scan_target(const RunConfig& c) {
  return {c.v1 != 0.0 ? BarrierMode::general : BarrierMode::pure_imaginary, c.width, c.v1};
}

// Singularities for find-ss and for index resolution.
std::vector<SpectralSingularity> locate(const RunConfig& c, int wanted, std::ostream& err) {
  std::vector<SpectralSingularity> roots;
  if (general_search(c)) {
    roots = find_in_window(search_config(c), scan_target(c));
    if (c.count && static_cast<int>(roots.size()) > *c.count) {
      roots.resize(static_cast<std::size_t>(*c.count));
    }
    return roots;
  }
  SearchConfig base;
  base.grid_e = c.grid_e;
  base.grid_v = c.grid_v;
  auto enumeration = enumerate_table(c.width, wanted, base);
  if (enumeration.warning) {
    err << "warning: " << *enumeration.warning << '\n';
  }
  return enumeration.singularities;
}

SpectralSingularity resolve_singularity(const RunConfig& c, std::ostream& err) {
  if (c.ss_index) {
    const auto roots = locate(c, *c.ss_index, err);
    if (static_cast<int>(roots.size()) < *c.ss_index) {
      std::ostringstream msg;
      msg << "singularity index " << *c.ss_index << " not found (" << roots.size()
          << " located)";
      throw Error(msg.str());
    }
    return roots[static_cast<std::size_t>(*c.ss_index - 1)];
  }
  const double e = *c.ss_e;
  const double v = *c.ss_v;
  const double residual = std::abs(transfer_matrix(e, Barrier<double>{c.v1, v, c.width}).m22());
  if (!(residual <= c.residual_gate)) {
    std::ostringstream msg;
    msg << "(" << e << ", " << v << ") is not a spectral singularity: |m22| = " << residual
        << " exceeds the gate " << c.residual_gate;
    throw DomainError(msg.str());
  }
  auto ss = refine_root({e, v, 0.0}, c.width, c.v1);
  if (std::abs(ss.e_ss - e) > 1e-6 * e || std::abs(ss.v_ss - v) > 1e-6 * std::abs(v)) {
    throw DomainError("refinement moved away from the given coordinates");
  }
  return ss;
}

std::optional<std::string> header_comment(const RunConfig& c) {
  if (!c.timestamp) {
    return std::nullopt;
  }
  return "nhscatter " + c.subcommand + " generated " + io::timestamp_utc();
}

// Writes a table to the configured destination in the configured format.
void emit(const RunConfig& c, const Table& table, nlohmann::ordered_json meta, std::ostream& out) {
  std::ofstream file;
  std::ostream* dest = &out;
  if (!c.output_path.empty()) {
    file.open(c.output_path);
    if (!file) {
      throw Error("cannot open output file " + c.output_path);
    }
    dest = &file;
  }
  if (c.format == io::Format::csv) {
    io::write_csv(*dest, table, header_comment(c));
  } else {
    meta["command"] = c.subcommand;
    if (c.timestamp) {
      meta["generated_at"] = io::timestamp_utc();
    }
    meta["rows"] = io::to_json(table);
    *dest << meta.dump(2) << '\n';
  }
}

std::string level_tag(double level) {
  std::ostringstream s;
  s << level;
  return s.str();
}

double relative_error(double computed, double reference) {
  return std::abs(computed - reference) / std::abs(reference);
}

}  // namespace

void RunConfig::validate() const {
  if (!(width > 0)) {
    throw UsageError("--width must be positive");
  }
  if (count && *count < 1) {
    throw UsageError("--count must be at least 1");
  }
  for (const auto* w : {&e_window, &v_window}) {
    if (*w && !((**w)[0] > 0 && (**w)[1] > (**w)[0])) {
      throw UsageError("windows must be positive and ordered as lo:hi");
    }
  }
  if (grid_e < 16 || grid_v < 16) {
    throw UsageError("grids need at least 16 points per axis");
  }
  if (subcommand == "analyze" || subcommand == "contours") {
    const bool by_coords = ss_e.has_value() || ss_v.has_value();
    if (ss_index && by_coords) {
      throw UsageError("give either --ss-index or --e/--v, not both");
    }
    if (!ss_index && !(ss_e && ss_v)) {
      throw UsageError(subcommand + " needs a singularity: --ss-index or both --e and --v");
    }
    if (ss_index && *ss_index < 1) {
      throw UsageError("--ss-index is 1-based");
    }
  }
  if (subcommand == "contours") {
    if (level_list.empty() && levels < 1) {
      throw UsageError("--levels must be at least 1");
    }
    if (n_points < 64) {
      throw UsageError("--points must be at least 64");
    }
    if (!(log_base > 1)) {
      throw UsageError("--log-base must exceed 1");
    }
    if (!(level_step > 0)) {
      throw UsageError("--level-step must be positive");
    }
  }
}

int cmd_find_ss(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto roots = locate(c, c.count.value_or(10), err);
  Table table{{"index", "e_ss", "v_ss", "residual", "chi", "chi_prime"}, {}};
  for (const auto& ss : roots) {
    Cell chi;
    Cell chi_prime;
    try {
      const auto conic = conic_analysis(ss);
      chi = num(conic.chi);
      chi_prime = num(conic.chi_prime);
    } catch (const Error& e) {
      err << "warning: SS" << ss.index << ": " << e.what() << '\n';
    }
    table.add_row({integer(ss.index), num(ss.e_ss), num(ss.v_ss), num(ss.residual), chi,
                   chi_prime});
  }
  nlohmann::ordered_json meta;
  meta["width"] = c.width;
  meta["v1"] = c.v1;
  emit(c, table, std::move(meta), out);
  if (roots.empty()) {
    err << "no spectral singularity found in the search window\n";
    return kExitEmpty;
  }
  return kExitSuccess;
}

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto ss = resolve_singularity(c, err);
  const auto conic = conic_analysis(ss);

  Table table{{"section", "name", "value", "closed_form", "relative_discrepancy"}, {}};
  const auto add = [&](const char* section, std::string name, double value) {
    table.add_row({text(section), text(std::move(name)), num(value), Cell{}, Cell{}});
  };
  add("singularity", "e_ss", ss.e_ss);
  add("singularity", "v_ss", ss.v_ss);
  add("singularity", "v1", ss.v1_fixed);
  add("singularity", "width", ss.width_b);
  add("singularity", "residual", ss.residual);

  add("coefficient", "A", conic.m.a);
  add("coefficient", "A'", conic.s.a);
  add("coefficient", "B", conic.m.b);
  add("coefficient", "B'", conic.s.b);
  add("coefficient", "H", conic.m.h);
  add("coefficient", "H'", conic.s.h);
  add("coefficient", "C", conic.m.c);
  add("coefficient", "D", conic.m.d);
  add("coefficient", "C'", conic.s.c);
  add("coefficient", "D'", conic.s.d);
  add("coefficient", "chi", conic.chi);
  add("coefficient", "chi_prime", conic.chi_prime);
  add("coefficient", "eccentricity", conic.geometry_m.eccentricity);
  add("coefficient", "orientation_deg", conic.geometry_m.orientation_rad * kDegrees);
  add("coefficient", "eccentricity_prime", conic.geometry_s.eccentricity);
  add("coefficient", "orientation_prime_deg", conic.geometry_s.orientation_rad * kDegrees);

  const double scale = reference::kTableScale;
  add("table_1e-5", "A", conic.m.a / scale);
  add("table_1e-5", "A'", conic.s.a / scale);
  add("table_1e-5", "B", conic.m.b / scale);
  add("table_1e-5", "B'", conic.s.b / scale);
  add("table_1e-5", "H", conic.m.h / scale);
  add("table_1e-5", "H'", conic.s.h / scale);

  if (ss.v1_fixed == 0.0) {
    for (const auto& e : closed_form_cross_check(ss).entries) {
      table.add_row({text("closed_form"), text(e.name), num(e.numeric_value),
                     num(e.closed_form_value), num(e.relative_discrepancy)});
    }
  }
  nlohmann::ordered_json meta;
  meta["width"] = c.width;
  meta["v1"] = c.v1;
  emit(c, table, std::move(meta), out);
  return kExitSuccess;
}

int cmd_contours(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto ss = resolve_singularity(c, err);
  ContourOptions options;
  options.log_base = c.log_base;
  options.n_points = c.n_points;
  options.precision = c.precision;

  std::vector<double> levels = c.level_list;
  if (levels.empty()) {
    if (c.level_max) {
      for (int i = 0; i < c.levels; ++i) {
        levels.push_back(*c.level_max - c.level_step * i);
      }
    } else {
      levels = default_levels(ss, c.levels, options, c.level_step);
    }
  }
  std::vector<Quantity> quantities;
  if (c.quantity != QuantitySelection::reflection) {
    quantities.push_back(Quantity::transmission);
  }
  if (c.quantity != QuantitySelection::transmission) {
    quantities.push_back(Quantity::reflection);
  }

  const auto report = self_similarity_report(ss, levels, options, quantities);

  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& o : report.outcomes) {
    if (!o.ok()) {
      err << to_string(o.quantity) << " level " << o.level_log << ": " << o.error << '\n';
      continue;
    }
    const std::string name =
        std::string(to_string(o.quantity)) + "_level_" + level_tag(o.level_log) + ".csv";
    Table pts{{"angle_index", "e", "v", "residual"}, {}};
    const auto& poly = *o.contour;
    for (std::size_t i = 0; i < poly.ray_count(); ++i) {
      pts.add_row({integer(static_cast<long long>(i)), num(poly.center_e + poly.offsets[i](0)),
                   num(poly.center_v + poly.offsets[i](1)), num(poly.residuals[i])});
    }
    std::ofstream file(dir / name);
    io::write_csv(file, pts, header_comment(c));
    written.push_back(name);
  }

  Table summary{{"quantity", "level_log", "status", "semi_major", "semi_minor", "eccentricity",
                 "orientation_deg", "rms_residual", "center_offset_rel", "residual_max", "error"},
                {}};
  for (const auto& o : report.outcomes) {
    if (o.ok()) {
      summary.add_row({text(to_string(o.quantity)), num(o.level_log), text("ok"),
                       num(o.fit->semi_major), num(o.fit->semi_minor), num(o.fit->eccentricity()),
                       num(o.fit->orientation_rad * kDegrees), num(o.fit->rms_residual),
                       num(o.fit->center_offset() / o.fit->semi_minor),
                       num(o.contour->residual_max), Cell{}});
    } else {
      summary.add_row({text(to_string(o.quantity)), num(o.level_log), text("failed"), Cell{},
                       Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, text(o.error)});
    }
  }
  nlohmann::ordered_json aggregate;
  aggregate["e_ss"] = io::rounded(ss.e_ss);
  aggregate["v_ss"] = io::rounded(ss.v_ss);
  aggregate["eccentricity_spread"] = io::rounded(report.eccentricity_spread);
  aggregate["orientation_spread_deg"] = io::rounded(report.orientation_spread_deg());
  aggregate["orientation_spread_tr_deg"] = io::rounded(report.orientation_spread_tr_deg);
  aggregate["radius_mismatch"] = io::rounded(report.radius_mismatch);
  aggregate["max_rms_residual"] = io::rounded(report.max_rms_residual);
  aggregate["max_center_offset_rel"] = io::rounded(report.max_center_offset);
  aggregate["hessian_orientation_deg"] = io::rounded(report.hessian_orientation_deg);
  aggregate["hessian_orientation_diff_deg"] = io::rounded(report.hessian_orientation_diff_deg);
  aggregate["thresholds_asserted"] = report.thresholds_asserted;
  aggregate["pass"] = report.pass();

  if (c.format == io::Format::csv) {
    std::ofstream file(dir / "summary.csv");
    io::write_csv(file, summary, header_comment(c));
    file << "# aggregate " << aggregate.dump() << '\n';
  } else {
    nlohmann::ordered_json doc;
    doc["command"] = c.subcommand;
    if (c.timestamp) {
      doc["generated_at"] = io::timestamp_utc();
    }
    doc["aggregate"] = aggregate;
    doc["levels"] = io::to_json(summary);
    std::ofstream(dir / "summary.json") << doc.dump(2) << '\n';
  }

  if (c.plot_script) {
    std::ofstream gp(dir / "plot_contours.gp");
    gp << "set datafile separator ','\nset xlabel 'E'\nset ylabel 'V'\nset size ratio -1\n"
       << "set key outside\nplot \\\n";
    for (std::size_t i = 0; i < written.size(); ++i) {
      gp << "  '" << written[i] << "' using 2:3 every ::1 with lines title '"
         << written[i].substr(0, written[i].size() - 4) << "'"
         << (i + 1 < written.size() ? ", \\\n" : "\n");
    }
  }

  out << "contours: " << report.succeeded() << " of " << report.outcomes.size()
      << " levels traced into " << dir.string() << '\n';
  out << "eccentricity_spread=" << io::format_number(report.eccentricity_spread)
      << " orientation_spread_deg=" << io::format_number(report.orientation_spread_deg())
      << " radius_mismatch=" << io::format_number(report.radius_mismatch)
      << " pass=" << (report.pass() ? "yes" : "no") << '\n';
  return report.succeeded() > 0 ? kExitSuccess : kExitFailure;
}

int cmd_reproduce_tables(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const bool have_reference = c.width == 1.0 && c.v1 == 0.0;
  const int count = c.count.value_or(static_cast<int>(reference::kUnitWidth.size()));
  SearchConfig base;
  base.grid_e = c.grid_e;
  base.grid_v = c.grid_v;
  const auto enumeration = enumerate_table(c.width, count, base);
  if (enumeration.warning) {
    err << "warning: " << *enumeration.warning << '\n';
  }

  Table table{{"check", "ss", "computed", "reference", "relative_error", "tolerance", "status"}, {}};
  int failures = 0;
  const auto check = [&](const std::string& name, int index, double computed, double ref,
                         double tol) {
    const double rel = relative_error(computed, ref);
    const bool ok = rel <= tol;
    failures += ok ? 0 : 1;
    table.add_row({text(name), integer(index), num(computed), num(ref), num(rel), num(tol),
                   text(ok ? "PASS" : "FAIL")});
  };

  for (const auto& ss : enumeration.singularities) {
    const auto conic = conic_analysis(ss);
    if (!have_reference || ss.index > static_cast<int>(reference::kUnitWidth.size())) {
      table.add_row({text("e_ss"), integer(ss.index), num(ss.e_ss), Cell{}, Cell{}, Cell{},
                     text("no reference")});
      table.add_row({text("v_ss"), integer(ss.index), num(ss.v_ss), Cell{}, Cell{}, Cell{},
                     text("no reference")});
      table.add_row({text("chi"), integer(ss.index), num(conic.chi), Cell{}, Cell{}, Cell{},
                     text("no reference")});
      continue;
    }
    const auto& ref = reference::kUnitWidth[static_cast<std::size_t>(ss.index - 1)];
    const double scale = reference::kTableScale;
    check("e_ss", ss.index, ss.e_ss, ref.e_ss, 1e-9);
    check("v_ss", ss.index, ss.v_ss, ref.v_ss, 1e-9);
    check("chi", ss.index, conic.chi, ref.chi, 1e-2);
    check("A", ss.index, conic.m.a, ref.a_scaled * scale, 1e-3);
    check("B", ss.index, conic.m.b, ref.b_scaled * scale, 1e-3);
    check("H", ss.index, conic.m.h, ref.h_scaled * scale, 1e-3);
    check("A'=A", ss.index, conic.s.a, conic.m.a, 1e-6);
    check("B'=B", ss.index, conic.s.b, conic.m.b, 1e-6);
    check("H'=H", ss.index, conic.s.h, conic.m.h, 1e-6);
    check("chi'=chi", ss.index, conic.chi_prime, conic.chi, 1e-6);
    const double assembled = (ref.h_scaled * ref.h_scaled - 4 * ref.a_scaled * ref.b_scaled) *
                             scale * scale;
    check("H^2-4AB (reference)", ss.index, assembled, ref.chi, 1e-3);
  }
  if (have_reference && static_cast<int>(enumeration.singularities.size()) < count) {
    ++failures;
  }

  nlohmann::ordered_json meta;
  meta["width"] = c.width;
  meta["failures"] = failures;
  emit(c, table, std::move(meta), out);
  if (c.format == io::Format::csv) {
    out << "# reproduce-tables: " << (failures == 0 ? "PASS" : "FAIL") << " ("
        << failures << " failing checks)\n";
  }
  return failures == 0 ? kExitSuccess : kExitFailure;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    c.validate();
    if (c.subcommand == "find-ss") {
      return cmd_find_ss(c, out, err);
    }
    if (c.subcommand == "analyze") {
      return cmd_analyze(c, out, err);
    }
    if (c.subcommand == "contours") {
      return cmd_contours(c, out, err);
    }
    if (c.subcommand == "reproduce-tables") {
      return cmd_reproduce_tables(c, out, err);
    }
    throw UsageError("unknown subcommand '" + c.subcommand + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace nhs::cli
