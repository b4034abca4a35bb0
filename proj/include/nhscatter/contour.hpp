#pragma once

// Constant-T and constant-R loci around a spectral singularity, traced by
// shooting rays from the singularity and solving a 1D level crossing on each.

#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nhscatter/finder.hpp"
#include "nhscatter/local_conic.hpp"
#include "nhscatter/scalar.hpp"

namespace nhs {

enum class Quantity { transmission, reflection };

const char* to_string(Quantity q);  // "T" / "R"

struct ContourOptions {
  double log_base = std::numbers::e;  // levels are log_base(T) or log_base(R)
  int n_points = 256;
  PrecisionMode precision = PrecisionMode::standard;
};

struct ContourPolyline {
  Quantity quantity = Quantity::transmission;
  double level_log = 0;
  double log_base = std::numbers::e;
  PrecisionMode precision = PrecisionMode::standard;
  double center_e = 0;  // the singularity
  double center_v = 0;
  // Offsets from the centre, one per ray angle 2 pi i / n, followed by a copy
  // of the first so the list is closed.
  std::vector<Eigen::Vector2d> offsets;
  std::vector<double> residuals;  // |log q - level| per ray
  double residual_max = 0;
  int winding_number = 0;

  /// Number of distinct points (rays).
  std::size_t ray_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const Eigen::Vector2d> ray_offsets() const { return {offsets.data(), ray_count()}; }
  std::vector<Eigen::Vector2d> points() const;  // absolute (E, V), closed
  bool closed() const;
};

/// Admissible range of the implied M (or S) level for a given singularity.
struct LevelWindow {
  double implied_value = 0;  // base^(-level)
  double floor = 0;          // 1e4 eps max|Q_i| (cancellation floor)
  double ceiling = 0;        // 1e-2 lambda_min r_basin^2 (quadratic basin)
  double basin_radius = 0;   // 1e-2 |(e_ss, v_ss)|
  bool admissible() const { return implied_value >= floor && implied_value <= ceiling; }
};

LevelWindow level_window(const SpectralSingularity& ss, Quantity quantity, double level_log,
                         const ContourOptions& options, const Eigen::Matrix2d& hessian);

/// Cancellation scale at the singularity: max|Q_i| for pure-imaginary
/// barriers, the squared m22 term scale otherwise.
double cancellation_scale(const SpectralSingularity& ss);

/// Throws LevelOutOfRangeError outside the level window and NonBracketingError
/// when a ray leaves the basin without crossing the level.
ContourPolyline trace_contour(const SpectralSingularity& ss, Quantity quantity,
                              double level_log, const ContourOptions& options = {});

/// Same, reusing an already computed Hessian of M (for T) or S (for R).
ContourPolyline trace_contour(const SpectralSingularity& ss, Quantity quantity,
                              double level_log, const ContourOptions& options,
                              const Eigen::Matrix2d& hessian);

/// Winding number of a closed polyline (given as offsets) around the origin.
int winding_number(std::span<const Eigen::Vector2d> closed_offsets);

}  // namespace nhs
