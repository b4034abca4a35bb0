#include "nhscatter/ellipse_fit.hpp"

#include <cmath>
#include <limits>

#include "nhscatter/errors.hpp"
#include "nhscatter/local_conic.hpp"

namespace nhs {
namespace {

// Root of (r0 z0 / (s + r0))^2 + (z1 / (s + 1))^2 - 1 by bisection.
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1;
  double s1 = g < 0 ? 0 : std::hypot(n0, z1) - 1;
  double s = 0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) {
      break;
    }
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1;
    if (g > 0) {
      s0 = s;
    } else if (g < 0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

}  // namespace

double EllipseFit::eccentricity() const {
  if (semi_major <= 0) {
    return 0;
  }
  const double ratio = semi_minor / semi_major;
  return std::sqrt(std::max(0.0, 1 - ratio * ratio));
}

double distance_to_ellipse(double a, double b, const Eigen::Vector2d& point) {
  // Reduce to the first quadrant; the ellipse is symmetric.
  const double y0 = std::abs(point(0));
  const double y1 = std::abs(point(1));
  if (y1 > 0) {
    if (y0 > 0) {
      const double z0 = y0 / a;
      const double z1 = y1 / b;
      const double g = z0 * z0 + z1 * z1 - 1;
      if (g == 0) {
        return 0;
      }
      const double r0 = (a / b) * (a / b);
      const double s = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (s + r0);
      const double x1 = y1 / (s + 1);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - b);
  }
  const double numer = a * y0;
  const double denom = a * a - b * b;
  if (numer < denom) {
    const double xa = numer / denom;
    const double x0 = a * xa;
    const double x1 = b * std::sqrt(1 - xa * xa);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - a);
}

EllipseFit fit_ellipse(std::span<const Eigen::Vector2d> offsets, const Eigen::Vector2d& reference) {
  const auto n = static_cast<Eigen::Index>(offsets.size());
  if (n < 6) {
    throw DegenerateFitError("an ellipse fit needs at least 6 points");
  }

  // Normalise: centroid to the origin, unit rms radius.
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : offsets) {
    mean += p;
  }
  mean /= static_cast<double>(n);
  double rms = 0;
  for (const auto& p : offsets) {
    rms += (p - mean).squaredNorm();
  }
  const double scale = std::sqrt(rms / static_cast<double>(n));
  if (!(scale > 0)) {
    throw DegenerateFitError("points are coincident");
  }

  Eigen::Matrix2d spread = Eigen::Matrix2d::Zero();
  for (const auto& p : offsets) {
    const Eigen::Vector2d q = (p - mean) / scale;
    spread += q * q.transpose();
  }
  const Eigen::Vector2d spread_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(spread, Eigen::EigenvaluesOnly).eigenvalues();
  if (!(spread_eig(0) > 1e-10 * spread_eig(1))) {
    throw DegenerateFitError("points are collinear");
  }

  Eigen::MatrixXd quad(n, 3);
  Eigen::MatrixXd lin(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d q = (offsets[static_cast<std::size_t>(i)] - mean) / scale;
    quad.row(i) << q(0) * q(0), q(0) * q(1), q(1) * q(1);
    lin.row(i) << q(0), q(1), 1.0;
  }
  const Eigen::Matrix3d s1 = quad.transpose() * quad;
  const Eigen::Matrix3d s2 = quad.transpose() * lin;
  const Eigen::Matrix3d s3 = lin.transpose() * lin;
  const Eigen::Matrix3d t = -s3.ldlt().solve(s2.transpose());
  const Eigen::Matrix3d reduced = s1 + s2 * t;
  // Premultiply by the inverse of the constraint block [[0,0,2],[0,-1,0],[2,0,0]].
  Eigen::Matrix3d constrained;
  constrained.row(0) = reduced.row(2) / 2;
  constrained.row(1) = -reduced.row(1);
  constrained.row(2) = reduced.row(0) / 2;

  const Eigen::EigenSolver<Eigen::Matrix3d> solver(constrained);
  Eigen::Vector3d a1;
  bool found = false;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d v = solver.eigenvectors().col(i).real();
    const double cond = 4 * v(0) * v(2) - v(1) * v(1);
    if (cond > 0 && cond > best) {
      best = cond;
      a1 = v;
      found = true;
    }
  }
  if (!found) {
    throw DegenerateFitError("no elliptical solution in the least-squares conic fit");
  }
  const Eigen::Vector3d a2 = t * a1;
  const double a = a1(0), b = a1(1), c = a1(2), d = a2(0), e = a2(1), f = a2(2);
  if (b * b - 4 * a * c >= 0) {
    throw DegenerateFitError("fitted conic is not an ellipse");
  }

  EllipseFit fit;
  fit.conic = {a, b, c, d, e, f};

  Eigen::Matrix2d form;
  form << a, b / 2, b / 2, c;
  const Eigen::Vector2d centre = form.ldlt().solve(Eigen::Vector2d(-d / 2, -e / 2));
  double f0 = f + 0.5 * (d * centre(0) + e * centre(1));
  if (f0 > 0) {
    form = -form;
    f0 = -f0;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(form);
  const double lam_small = eig.eigenvalues()(0);
  const double lam_large = eig.eigenvalues()(1);
  if (!(lam_small > 0) || !(f0 < 0)) {
    throw DegenerateFitError("fitted conic is imaginary or degenerate");
  }
  const Eigen::Vector2d major = eig.eigenvectors().col(0);

  const Eigen::Vector2d centre_offset = mean + scale * centre;
  fit.offset_e = centre_offset(0);
  fit.offset_v = centre_offset(1);
  fit.center_e = reference(0) + centre_offset(0);
  fit.center_v = reference(1) + centre_offset(1);
  fit.semi_major = scale * std::sqrt(-f0 / lam_small);
  fit.semi_minor = scale * std::sqrt(-f0 / lam_large);
  fit.orientation_rad = wrap_axis_angle(std::atan2(major(1), major(0)));

  // Residuals in the ellipse frame.
  const double ca = std::cos(fit.orientation_rad);
  const double sa = std::sin(fit.orientation_rad);
  double sum_sq = 0;
  for (const auto& p : offsets) {
    const Eigen::Vector2d rel = p - centre_offset;
    const Eigen::Vector2d local(ca * rel(0) + sa * rel(1), -sa * rel(0) + ca * rel(1));
    const double dist = distance_to_ellipse(fit.semi_major, fit.semi_minor, local);
    sum_sq += dist * dist;
  }
  fit.rms_residual = std::sqrt(sum_sq / static_cast<double>(n)) / fit.semi_minor;
  return fit;
}

EllipseFit fit_ellipse(const ContourPolyline& polyline) {
  if (!polyline.closed()) {
    throw DomainError("polyline is not closed");
  }
  if (polyline.ray_count() < 64) {
    throw DomainError("ellipse fit of a contour needs at least 64 points");
  }
  return fit_ellipse(polyline.ray_offsets(),
                     Eigen::Vector2d(polyline.center_e, polyline.center_v));
}

}  // namespace nhs
