#include "nhscatter/local_conic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nhscatter/finite_difference.hpp"

namespace nhs {

const char* to_string(Target t) { return t == Target::m ? "M" : "S"; }

double target_value(Target target, double e, double v, double v1, double width_b) {
  const auto tm = transfer_matrix(e, Barrier<double>{v1, v, width_b});
  const double m = abs_squared<double>(tm.m22());
  if (target == Target::m) {
    return m;
  }
  return m / abs_squared<double>(tm.m21());
}

LocalQuadratic local_quadratic_at(Target target, double e, double v, double v1, double width_b,
                                  const DerivativeOptions& options) {
  // Features shrink like 1/b in both directions for wide barriers.
  const double rel = options.relative_step / std::max(1.0, width_b);
  const double he = rel * std::max(std::abs(e), 1e-8);
  const double hv = rel * std::max(std::abs(v), 1e-8);
  const auto f = [&](double x, double y) { return target_value(target, x, y, v1, width_b); };
  const auto d = richardson_derivatives(f, e, v, he, hv);

  if (d.richardson_disagreement > options.max_disagreement) {
    std::ostringstream msg;
    msg << "finite-difference Hessian of " << to_string(target) << " at (" << e << ", " << v
        << ") is ill-conditioned: Richardson pair disagrees by " << d.richardson_disagreement;
    throw IllConditionedError(msg.str());
  }
  LocalQuadratic q;
  q.target = target;
  q.grad_e = d.gradient(0);
  q.grad_v = d.gradient(1);
  q.hess_ee = d.hessian(0, 0);
  q.hess_ev = d.hessian(0, 1);
  q.hess_vv = d.hessian(1, 1);
  q.asymmetry = d.asymmetry;
  q.richardson_disagreement = d.richardson_disagreement;
  return q;
}

LocalQuadratic numeric_derivatives(const SpectralSingularity& ss, Target target,
                                   const DerivativeOptions& options) {
  const double residual =
      std::abs(transfer_matrix(ss.e_ss, ss.barrier()).m22());
  if (!(residual < residual_tolerance(ss.e_ss, ss.v_ss, ss.width_b, ss.v1_fixed))) {
    std::ostringstream msg;
    msg << "(" << ss.e_ss << ", " << ss.v_ss << ") is not a spectral singularity: |m22| = "
        << residual;
    throw DomainError(msg.str());
  }
  if (target == Target::s) {
    const double p = abs_squared<double>(transfer_matrix(ss.e_ss, ss.barrier()).m21());
    if (!(p > 0.5)) {
      throw DomainError("P at the singularity is too small to form S = M/P");
    }
  }
  return local_quadratic_at(target, ss.e_ss, ss.v_ss, ss.v1_fixed, ss.width_b, options);
}

ConicCoefficients ConicCoefficients::from(const LocalQuadratic& q) {
  return {0.5 * q.hess_ee, 0.5 * q.hess_vv, q.hess_ev, q.grad_e, q.grad_v};
}

double wrap_axis_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  angle = std::fmod(angle, pi);
  if (angle > pi / 2) {
    angle -= pi;
  } else if (angle <= -pi / 2) {
    angle += pi;
  }
  return angle;
}

double axis_angle_difference(double a, double b) {
  return std::abs(wrap_axis_angle(a - b));
}

HessianGeometry hessian_geometry(const Eigen::Matrix2d& hessian) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(hessian);
  HessianGeometry g;
  g.lambda_min = solver.eigenvalues()(0);
  g.lambda_max = solver.eigenvalues()(1);
  if (!(g.lambda_min > 0)) {
    std::ostringstream msg;
    msg << "Hessian is not positive definite (eigenvalues " << g.lambda_min << ", "
        << g.lambda_max << ")";
    throw ClassificationError(msg.str());
  }
  g.eccentricity = std::sqrt(1.0 - g.lambda_min / g.lambda_max);
  const Eigen::Vector2d major = solver.eigenvectors().col(0);
  g.orientation_rad = wrap_axis_angle(std::atan2(major(1), major(0)));
  return g;
}

ConicAnalysis conic_analysis(const SpectralSingularity& ss, double level,
                             const DerivativeOptions& options) {
  ConicAnalysis out;
  out.quad_m = numeric_derivatives(ss, Target::m, options);
  out.quad_s = numeric_derivatives(ss, Target::s, options);
  out.m = ConicCoefficients::from(out.quad_m);
  out.s = ConicCoefficients::from(out.quad_s);
  out.chi = out.m.chi();
  out.chi_prime = out.s.chi();
  out.g_level = -level;
  out.g_level_prime = -level;
  if (!(out.chi < 0) || !(out.chi_prime < 0)) {
    std::ostringstream msg;
    msg << "level sets at (" << ss.e_ss << ", " << ss.v_ss
        << ") are not ellipses: chi = " << out.chi << ", chi' = " << out.chi_prime;
    throw ClassificationError(msg.str());
  }
  out.geometry_m = hessian_geometry(out.quad_m.hessian());
  out.geometry_s = hessian_geometry(out.quad_s.hessian());
  return out;
}

}  // namespace nhs
