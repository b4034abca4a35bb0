#pragma once

// Spectral singularity search: real zeros of m22(E, V) located by a grid
// scan of |m22|^2 followed by two-variable Newton on (Re m22, Im m22).

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nhscatter/barrier.hpp"
#include "nhscatter/scalar.hpp"

namespace nhs {

/// Which coordinate the scan treats as "V".
enum class BarrierMode {
  pure_imaginary,  // V = i v, unknowns (E, v)
  general,         // V = v1_fixed + i v2, unknowns (E, v2)
  real,            // V = v1, v2 = 0, unknowns (E, v1); never has singularities
};

struct SpectralSingularity {
  double e_ss = 0;
  double v_ss = 0;      // imaginary height (v2) at the singularity
  double v1_fixed = 0;  // real height, 0 in pure-imaginary mode
  double width_b = 1;
  double residual = 0;  // |m22(e_ss, v_ss)|
  int index = 0;        // 1-based ordinal along increasing e_ss
  int iterations = 0;
  bool converged = false;

  Barrier<double> barrier() const { return {v1_fixed, v_ss, width_b}; }
  double k_ss() const;
};

struct SearchConfig {
  std::array<double, 2> e_range{1.0, 1200.0};
  std::array<double, 2> v_range{1.0, 250.0};
  int grid_e = 600;
  int grid_v = 300;
  double newton_tol = 1e-14;  // on |step| relative to max(1, |x|)
  int max_iter = 100;
  // A grid local minimum is a candidate only if it sits below this fraction
  // of the largest value in its 3x3 neighbourhood ...
  double relative_threshold = 0.5;
  // ... and below this absolute value. Hermitian barriers have M >= 1.
  double absolute_threshold = 0.5;

  /// Throws DomainError for unordered/non-positive ranges or grids below 16.
  /// The V range may include non-positive values in real mode.
  void validate(BarrierMode mode = BarrierMode::pure_imaginary) const;
};

struct ScanTarget {
  BarrierMode mode = BarrierMode::pure_imaginary;
  double width_b = 1.0;
  double v1_fixed = 0.0;  // general mode only

  Barrier<double> barrier_at(double v) const;
};

struct SeedPoint {
  double e = 0;
  double v = 0;
  double m_value = 0;
};

/// Local minima of |m22|^2 over the config grid, ordered by e.
std::vector<SeedPoint> scan_candidates(const SearchConfig& config, const ScanTarget& target);

/// Newton refinement of a seed to a root of m22 in the (E, v2) plane with
/// v1 held at `v1_fixed`. Throws ConvergenceError with the best iterate when
/// the residual gate |m22| < 1e-12 max(1, term scale) is not met.
SpectralSingularity refine_root(const SeedPoint& seed, double width_b, double v1_fixed,
                                const SearchConfig& config = {});

/// Residual gate used by refine_root.
double residual_tolerance(double e, double v, double width_b, double v1_fixed);

/// The same root polished in Extended precision, for high-resolution contour
/// work. Starts from the double root.
struct ExtendedRoot {
  Extended e;
  Extended v;
  Extended residual;
};
ExtendedRoot refine_root_extended(const SpectralSingularity& ss);

struct Enumeration {
  std::vector<SpectralSingularity> singularities;
  // Set when the search window was exhausted before `count` roots were found.
  std::optional<std::string> warning;
};

/// The first `count` singularities of a pure-imaginary barrier of the given
/// width, ordered by e_ss and indexed 1..n. Windows scale as 1/b^2 from the
/// unit-width defaults and are widened until enough roots are found.
Enumeration enumerate_table(double width_b, int count, const SearchConfig& base = {});

/// All singularities inside the config window for the given target, refined,
/// deduplicated and indexed by e_ss.
std::vector<SpectralSingularity> find_in_window(const SearchConfig& config,
                                                const ScanTarget& target);

/// Two roots are the same when within 1e-6 relative in both coordinates.
bool same_root(const SpectralSingularity& a, const SpectralSingularity& b);

}  // namespace nhs
