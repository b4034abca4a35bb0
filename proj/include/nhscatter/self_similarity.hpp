#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhscatter/contour.hpp"
#include "nhscatter/ellipse_fit.hpp"

namespace nhs {

struct SimilarityThresholds {
  double eccentricity_spread = 0.01;
  double orientation_spread_deg = 0.5;
  double radius_mismatch = 1e-3;
  double rms_residual = 1e-3;
};

struct LevelOutcome {
  Quantity quantity = Quantity::transmission;
  double level_log = 0;
  std::optional<ContourPolyline> contour;
  std::optional<EllipseFit> fit;
  std::string error;  // empty on success

  bool ok() const { return fit.has_value(); }
};

struct SimilarityReport {
  std::vector<LevelOutcome> outcomes;
  SimilarityThresholds thresholds;
  // Thresholds are only asserted for pure-imaginary barriers.
  bool thresholds_asserted = true;

  double eccentricity_spread = 0;        // over every successful fit
  double orientation_spread_t_deg = 0;   // T fits among themselves
  double orientation_spread_r_deg = 0;   // R fits among themselves
  double orientation_spread_tr_deg = 0;  // any T fit against any R fit
  double radius_mismatch = 0;            // |r_T / r_R - 1| at matched level and angle
  double max_rms_residual = 0;
  double max_center_offset = 0;          // fitted centre distance / semi_minor
  double max_residual = 0;               // worst per-point level residual
  double hessian_orientation_deg = 0;    // major axis from the Hessian of M
  double hessian_orientation_diff_deg = 0;
  double hessian_eccentricity = 0;

  int succeeded() const;
  double orientation_spread_deg() const;
  bool pass() const;
};

/// Traces and fits every (level, quantity) pair. Per-level failures are
/// recorded in the outcome and do not stop the remaining levels.
SimilarityReport self_similarity_report(const SpectralSingularity& ss, std::span<const double> levels,
                                        const ContourOptions& options = {},
                                        std::span<const Quantity> quantities = {},
                                        const SimilarityThresholds& thresholds = {});

/// `count` levels spaced by `step`, starting from the highest level whose
/// implied value is at least twice the cancellation floor, snapped down to a
/// multiple of `step`.
std::vector<double> default_levels(const SpectralSingularity& ss, int count,
                                   const ContourOptions& options = {}, double step = 0.25);

}  // namespace nhs
