#include "nhscatter/self_similarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace nhs {
namespace {

constexpr double kDegrees = 180.0 / std::numbers::pi;

double max_pairwise_axis_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (double x : a) {
    for (double y : b) {
      worst = std::max(worst, axis_angle_difference(x, y));
    }
  }
  return worst;
}

}  // namespace

int SimilarityReport::succeeded() const {
  return static_cast<int>(std::count_if(outcomes.begin(), outcomes.end(),
                                        [](const LevelOutcome& o) { return o.ok(); }));
}

double SimilarityReport::orientation_spread_deg() const {
  return std::max({orientation_spread_t_deg, orientation_spread_r_deg, orientation_spread_tr_deg});
}

bool SimilarityReport::pass() const {
  if (succeeded() != static_cast<int>(outcomes.size()) || succeeded() < 2) {
    return false;
  }
  return eccentricity_spread < thresholds.eccentricity_spread &&
         orientation_spread_deg() < thresholds.orientation_spread_deg &&
         hessian_orientation_diff_deg < thresholds.orientation_spread_deg &&
         radius_mismatch < thresholds.radius_mismatch &&
         max_rms_residual < thresholds.rms_residual;
}

SimilarityReport self_similarity_report(const SpectralSingularity& ss, std::span<const double> levels,
                                        const ContourOptions& options,
                                        std::span<const Quantity> quantities,
                                        const SimilarityThresholds& thresholds) {
  static constexpr std::array<Quantity, 2> kBoth{Quantity::transmission, Quantity::reflection};
  if (quantities.empty()) {
    quantities = kBoth;
  }
  SimilarityReport report;
  report.thresholds = thresholds;
  report.thresholds_asserted = ss.v1_fixed == 0.0;

  const Eigen::Matrix2d hess_m = numeric_derivatives(ss, Target::m).hessian();
  const Eigen::Matrix2d hess_s = numeric_derivatives(ss, Target::s).hessian();
  const auto geometry = hessian_geometry(hess_m);
  report.hessian_orientation_deg = geometry.orientation_rad * kDegrees;
  report.hessian_eccentricity = geometry.eccentricity;

  for (double level : levels) {
    for (Quantity q : quantities) {
      LevelOutcome outcome;
      outcome.quantity = q;
      outcome.level_log = level;
      try {
        outcome.contour = trace_contour(ss, q, level, options,
                                        q == Quantity::transmission ? hess_m : hess_s);
        outcome.fit = fit_ellipse(*outcome.contour);
      } catch (const Error& e) {
        outcome.error = e.what();
        outcome.fit.reset();
      }
      report.outcomes.push_back(std::move(outcome));
    }
  }

  std::vector<double> ecc;
  std::vector<double> orient_t;
  std::vector<double> orient_r;
  for (const auto& o : report.outcomes) {
    if (!o.ok()) {
      continue;
    }
    ecc.push_back(o.fit->eccentricity());
    (o.quantity == Quantity::transmission ? orient_t : orient_r).push_back(o.fit->orientation_rad);
    report.max_rms_residual = std::max(report.max_rms_residual, o.fit->rms_residual);
    report.max_center_offset =
        std::max(report.max_center_offset, o.fit->center_offset() / o.fit->semi_minor);
    report.max_residual = std::max(report.max_residual, o.contour->residual_max);
    report.hessian_orientation_diff_deg =
        std::max(report.hessian_orientation_diff_deg,
                 axis_angle_difference(o.fit->orientation_rad, geometry.orientation_rad) * kDegrees);
  }
  if (!ecc.empty()) {
    const auto [lo, hi] = std::minmax_element(ecc.begin(), ecc.end());
    report.eccentricity_spread = *hi - *lo;
  }
  report.orientation_spread_t_deg = max_pairwise_axis_difference(orient_t, orient_t) * kDegrees;
  report.orientation_spread_r_deg = max_pairwise_axis_difference(orient_r, orient_r) * kDegrees;
  report.orientation_spread_tr_deg = max_pairwise_axis_difference(orient_t, orient_r) * kDegrees;

  // T against R at the same level, ray by ray.
  for (const auto& t : report.outcomes) {
    if (!t.ok() || t.quantity != Quantity::transmission) {
      continue;
    }
    for (const auto& r : report.outcomes) {
      if (!r.ok() || r.quantity != Quantity::reflection || r.level_log != t.level_log) {
        continue;
      }
      const auto rt = t.contour->ray_offsets();
      const auto rr = r.contour->ray_offsets();
      for (std::size_t i = 0; i < std::min(rt.size(), rr.size()); ++i) {
        report.radius_mismatch =
            std::max(report.radius_mismatch, std::abs(rt[i].norm() / rr[i].norm() - 1));
      }
    }
  }
  return report;
}

std::vector<double> default_levels(const SpectralSingularity& ss, int count,
                                   const ContourOptions& options, double step) {
  const double eps = options.precision == PrecisionMode::extended
                         ? static_cast<double>(machine_epsilon<Extended>())
                         : machine_epsilon<double>();
  const double floor = 1e4 * eps * cancellation_scale(ss);
  const double top_exact = -std::log(2 * floor) / std::log(options.log_base);
  const double top = std::floor(top_exact / step) * step;
  std::vector<double> levels;
  for (int i = 0; i < count; ++i) {
    levels.push_back(top - step * i);
  }
  return levels;
}

}  // namespace nhs
