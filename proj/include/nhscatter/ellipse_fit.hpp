#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

#include "nhscatter/contour.hpp"

namespace nhs {

struct EllipseFit {
  double center_e = 0;
  double center_v = 0;
  // Centre relative to the reference point the data were given against
  // (the singularity, for traced contours).
  double offset_e = 0;
  double offset_v = 0;
  double semi_major = 0;
  double semi_minor = 0;
  double orientation_rad = 0;  // major axis, in (-pi/2, pi/2]
  double rms_residual = 0;     // rms orthogonal distance / semi_minor
  // a x^2 + b xy + c y^2 + d x + e y + f = 0 in the normalised frame.
  std::array<double, 6> conic{};

  double eccentricity() const;
  double center_offset() const { return std::hypot(offset_e, offset_v); }
};

/// Direct least-squares ellipse fit (Fitzgibbon's ellipse-specific
/// constraint, in the numerically stable Halir-Flusser partitioning).
/// `offsets` are measured from `reference`. Needs at least 6 points; throws
/// DegenerateFitError when no ellipse solution exists.
EllipseFit fit_ellipse(std::span<const Eigen::Vector2d> offsets,
                       const Eigen::Vector2d& reference = Eigen::Vector2d::Zero());

/// Fit to a closed traced contour of at least 64 rays.
EllipseFit fit_ellipse(const ContourPolyline& polyline);

/// Shortest distance from `point` to the ellipse with semi-axes a >= b,
/// axis-aligned at the origin.
double distance_to_ellipse(double a, double b, const Eigen::Vector2d& point);

}  // namespace nhs
