#pragma once

// Second-order geometry of M = |m22|^2 and S = M / P around a spectral
// singularity. Derivatives are numeric; the closed forms are only
// compared against them (see closed_forms.hpp).

#include <Eigen/Dense>

#include "nhscatter/finder.hpp"

namespace nhs {

enum class Target { m, s };

const char* to_string(Target t);

/// M or S at (e, v2) for the barrier v1 + i v2 of width b.
double target_value(Target target, double e, double v, double v1, double width_b);

struct LocalQuadratic {
  Target target = Target::m;
  double grad_e = 0;
  double grad_v = 0;
  double hess_ee = 0;
  double hess_ev = 0;
  double hess_vv = 0;
  double asymmetry = 0;
  double richardson_disagreement = 0;

  Eigen::Vector2d gradient() const { return {grad_e, grad_v}; }
  Eigen::Matrix2d hessian() const {
    Eigen::Matrix2d h;
    h << hess_ee, hess_ev, hess_ev, hess_vv;
    return h;
  }
};

struct DerivativeOptions {
  double relative_step = 1e-3;        // h0 = relative_step * |coordinate| / max(1, b)
  double max_disagreement = 1e-3;     // Richardson pair tolerance
};

/// Derivatives at an arbitrary point; no residual gate.
LocalQuadratic local_quadratic_at(Target target, double e, double v, double v1, double width_b,
                                  const DerivativeOptions& options = {});

/// Derivatives at a located singularity. Requires residual < 1e-12 and, for
/// S, P > 0.5 at the point.
LocalQuadratic numeric_derivatives(const SpectralSingularity& ss, Target target,
                                   const DerivativeOptions& options = {});

/// Conic coefficients in the convention A = M_EE/2, B = M_VV/2, H = M_EV,
/// C = M_E, D = M_V.
struct ConicCoefficients {
  double a = 0;
  double b = 0;
  double h = 0;
  double c = 0;
  double d = 0;

  static ConicCoefficients from(const LocalQuadratic& q);
  /// H^2 - 4AB, i.e. M_EV^2 - M_EE M_VV.
  double chi() const { return h * h - 4 * a * b; }
};

/// Shape of the level sets of a positive-definite quadratic form.
struct HessianGeometry {
  double lambda_min = 0;
  double lambda_max = 0;
  double eccentricity = 0;    // sqrt(1 - lambda_min / lambda_max)
  double orientation_rad = 0; // major axis (lambda_min eigenvector), in (-pi/2, pi/2]
};

/// Throws ClassificationError unless `hessian` is positive definite.
HessianGeometry hessian_geometry(const Eigen::Matrix2d& hessian);

/// Wraps an axis angle into (-pi/2, pi/2].
double wrap_axis_angle(double angle);

/// Smallest difference between two axis directions, in [0, pi/2].
double axis_angle_difference(double a, double b);

struct ConicAnalysis {
  LocalQuadratic quad_m;
  LocalQuadratic quad_s;
  ConicCoefficients m;  // A, B, H, C, D
  ConicCoefficients s;  // A', B', H', C', D'
  double chi = 0;
  double chi_prime = 0;
  double g_level = 0;   // -M for the requested contour level
  double g_level_prime = 0;
  HessianGeometry geometry_m;
  HessianGeometry geometry_s;

  double eccentricity() const { return geometry_m.eccentricity; }
  double orientation_rad() const { return geometry_m.orientation_rad; }
};

/// Throws ClassificationError if either discriminant is non-negative.
/// `level` is the constant value of M (and of S) on the contour of interest.
ConicAnalysis conic_analysis(const SpectralSingularity& ss, double level = 0,
                             const DerivativeOptions& options = {});

}  // namespace nhs
