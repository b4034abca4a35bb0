#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace nhs {

/// Gradient and Hessian of a scalar field in the plane, from central
/// differences with one Richardson halving (fourth order).
struct PlanarDerivatives {
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  // |f_xy - f_yx| / max|H| between the two nesting orders of the mixed term.
  double asymmetry = 0;
  // max |H(h) - H(h/2)| / max|H|.
  double richardson_disagreement = 0;
};

namespace detail {

template <typename F>
double mixed_outer_x(const F& f, double x, double y, double hx, double hy) {
  // d/dx of a five-point d/dy.
  const auto dy = [&](double xx) {
    return (-f(xx, y + 2 * hy) + 8 * f(xx, y + hy) - 8 * f(xx, y - hy) + f(xx, y - 2 * hy)) /
           (12 * hy);
  };
  return (dy(x + hx) - dy(x - hx)) / (2 * hx);
}

template <typename F>
double mixed_outer_y(const F& f, double x, double y, double hx, double hy) {
  const auto dx = [&](double yy) {
    return (-f(x + 2 * hx, yy) + 8 * f(x + hx, yy) - 8 * f(x - hx, yy) + f(x - 2 * hx, yy)) /
           (12 * hx);
  };
  return (dx(y + hy) - dx(y - hy)) / (2 * hy);
}

struct Stencil {
  Eigen::Vector2d gradient;
  double xx, yy, xy, yx;
};

template <typename F>
Stencil central_stencil(const F& f, double x, double y, double hx, double hy) {
  const double f0 = f(x, y);
  const double fxp = f(x + hx, y);
  const double fxm = f(x - hx, y);
  const double fyp = f(x, y + hy);
  const double fym = f(x, y - hy);
  Stencil s;
  s.gradient = {(fxp - fxm) / (2 * hx), (fyp - fym) / (2 * hy)};
  s.xx = (fxp - 2 * f0 + fxm) / (hx * hx);
  s.yy = (fyp - 2 * f0 + fym) / (hy * hy);
  s.xy = mixed_outer_x(f, x, y, hx, hy);
  s.yx = mixed_outer_y(f, x, y, hx, hy);
  return s;
}

}  // namespace detail

/// `f(x, y)` is differentiated at (x, y) with base steps (hx, hy) and their
/// halves; the pair is combined as (4 D(h/2) - D(h)) / 3.
template <typename F>
PlanarDerivatives richardson_derivatives(const F& f, double x, double y, double hx, double hy) {
  const auto coarse = detail::central_stencil(f, x, y, hx, hy);
  const auto fine = detail::central_stencil(f, x, y, hx / 2, hy / 2);
  const auto extrapolate = [](double c, double fn) { return (4 * fn - c) / 3; };

  PlanarDerivatives d;
  d.gradient = (4 * fine.gradient - coarse.gradient) / 3;
  const double xx = extrapolate(coarse.xx, fine.xx);
  const double yy = extrapolate(coarse.yy, fine.yy);
  const double xy = extrapolate(coarse.xy, fine.xy);
  const double yx = extrapolate(coarse.yx, fine.yx);
  d.hessian << xx, 0.5 * (xy + yx), 0.5 * (xy + yx), yy;

  const double scale = std::max({std::abs(xx), std::abs(yy), std::abs(d.hessian(0, 1))});
  if (scale > 0) {
    d.asymmetry = std::abs(xy - yx) / scale;
    d.richardson_disagreement =
        std::max({std::abs(coarse.xx - fine.xx), std::abs(coarse.yy - fine.yy),
                  std::abs(0.5 * (coarse.xy + coarse.yx) - 0.5 * (fine.xy + fine.yx))}) /
        scale;
  }
  return d;
}

}  // namespace nhs
