#include "nhscatter/contour.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

namespace nhs {
namespace {

template <typename Real>
struct Location {
  Real e;
  Real v;
  Real v1;
  Real width_b;
};

// log_base of T or R at (e, v).
template <typename Real>
Real log_quantity(Quantity quantity, const Location<Real>& at, const Real& e, const Real& v,
                  const Real& ln_base) {
  using std::log;
  const auto tm = transfer_matrix(e, Barrier<Real>{at.v1, v, at.width_b});
  const Real log_m = log(abs_squared<Real>(tm.m22()));
  if (quantity == Quantity::transmission) {
    return -log_m / ln_base;
  }
  return (log(abs_squared<Real>(tm.m21())) - log_m) / ln_base;
}

template <typename Real>
int tolerance_bits() {
  return std::numeric_limits<Real>::digits - 4;
}

template <typename Real>
ContourPolyline trace_rays(const Location<Real>& at, Quantity quantity, double level_log,
                           const ContourOptions& options, const Eigen::Matrix2d& hessian,
                           double implied_value, double basin_radius) {
  using std::cos;
  using std::sin;
  const Real ln_base = Real(std::log(options.log_base));
  const Real level = Real(level_log);
  const int n = options.n_points;

  ContourPolyline out;
  out.quantity = quantity;
  out.level_log = level_log;
  out.log_base = options.log_base;
  out.precision = options.precision;
  out.center_e = static_cast<double>(at.e);
  out.center_v = static_cast<double>(at.v);
  out.offsets.reserve(static_cast<std::size_t>(n) + 1);
  out.residuals.reserve(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    const Real phi = Real(2) * pi<Real>() * Real(i) / Real(n);
    const Real ce = cos(phi);
    const Real cv = sin(phi);
    const auto crossing = [&](const Real& t) {
      return log_quantity(quantity, at, Real(at.e + t * ce), Real(at.v + t * cv), ln_base) - level;
    };

    // Quadratic-model guess for the crossing radius.
    const Eigen::Vector2d dir(static_cast<double>(ce), static_cast<double>(cv));
    const double curvature = dir.dot(hessian * dir);
    const Real guess = Real(std::sqrt(2.0 * implied_value / curvature));

    Real lo = guess / Real(2);
    Real f_lo = crossing(lo);
    for (int k = 0; k < 60 && !(f_lo > Real(0)); ++k) {
      lo /= Real(2);
      f_lo = crossing(lo);
    }
    Real hi = guess * Real(2);
    Real f_hi = crossing(hi);
    while (!(f_hi < Real(0))) {
      hi *= Real(2);
      if (hi > Real(basin_radius)) {
        std::ostringstream msg;
        msg << "ray " << i << " left the basin without crossing level " << level_log;
        throw NonBracketingError(msg.str());
      }
      f_hi = crossing(hi);
    }
    if (!(f_lo > Real(0))) {
      throw NonBracketingError("ray could not bracket the level on the inner side");
    }

    boost::uintmax_t max_iter = 200;
    const auto root = boost::math::tools::toms748_solve(
        crossing, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<Real>(tolerance_bits<Real>()),
        max_iter);
    const Real t = (root.first + root.second) / Real(2);
    using std::abs;
    const double residual = static_cast<double>(abs(crossing(t)));
    out.offsets.emplace_back(static_cast<double>(t * ce), static_cast<double>(t * cv));
    out.residuals.push_back(residual);
    out.residual_max = std::max(out.residual_max, residual);
  }
  out.offsets.push_back(out.offsets.front());
  out.winding_number = winding_number(out.offsets);
  return out;
}

}  // namespace

const char* to_string(Quantity q) { return q == Quantity::transmission ? "T" : "R"; }

std::vector<Eigen::Vector2d> ContourPolyline::points() const {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(offsets.size());
  for (const auto& o : offsets) {
    pts.emplace_back(center_e + o(0), center_v + o(1));
  }
  return pts;
}

bool ContourPolyline::closed() const {
  return offsets.size() >= 2 && offsets.front() == offsets.back();
}

double cancellation_scale(const SpectralSingularity& ss) {
  if (ss.v1_fixed == 0.0 && ss.v_ss > 0) {
    return q_decomposition(ss.e_ss, ss.v_ss, ss.width_b).max_abs_term;
  }
  const double s = m22_term_scale(ss.e_ss, ss.barrier());
  return s * s;
}

LevelWindow level_window(const SpectralSingularity& ss, Quantity quantity, double level_log,
                         const ContourOptions& options, const Eigen::Matrix2d& hessian) {
  (void)quantity;  // M and S share the window: same floor, and S's Hessian is passed in
  LevelWindow w;
  w.implied_value = std::pow(options.log_base, -level_log);
  const double eps = options.precision == PrecisionMode::extended
                         ? static_cast<double>(machine_epsilon<Extended>())
                         : machine_epsilon<double>();
  w.floor = 1e4 * eps * cancellation_scale(ss);
  w.basin_radius = 1e-2 * std::hypot(ss.e_ss, ss.v_ss);
  const double lambda_min = hessian_geometry(hessian).lambda_min;
  w.ceiling = 1e-2 * lambda_min * w.basin_radius * w.basin_radius;
  return w;
}

ContourPolyline trace_contour(const SpectralSingularity& ss, Quantity quantity, double level_log,
                              const ContourOptions& options) {
  const Target target = quantity == Quantity::transmission ? Target::m : Target::s;
  return trace_contour(ss, quantity, level_log, options,
                       numeric_derivatives(ss, target).hessian());
}

ContourPolyline trace_contour(const SpectralSingularity& ss, Quantity quantity, double level_log,
                              const ContourOptions& options, const Eigen::Matrix2d& hessian) {
  if (options.n_points < 64) {
    throw DomainError("contour tracing needs at least 64 rays");
  }
  if (!(options.log_base > 1)) {
    throw DomainError("log base must exceed 1");
  }
  const auto window = level_window(ss, quantity, level_log, options, hessian);
  if (!window.admissible()) {
    std::ostringstream msg;
    msg << to_string(quantity) << " level " << level_log << " implies value "
        << window.implied_value << ", outside [" << window.floor << ", " << window.ceiling
        << "] (cancellation floor, quadratic basin)";
    throw LevelOutOfRangeError(msg.str());
  }
  if (options.precision == PrecisionMode::extended) {
    const auto root = refine_root_extended(ss);
    const Location<Extended> at{root.e, root.v, Extended(ss.v1_fixed), Extended(ss.width_b)};
    return trace_rays(at, quantity, level_log, options, hessian, window.implied_value,
                      window.basin_radius);
  }
  const Location<double> at{ss.e_ss, ss.v_ss, ss.v1_fixed, ss.width_b};
  return trace_rays(at, quantity, level_log, options, hessian, window.implied_value,
                    window.basin_radius);
}

int winding_number(std::span<const Eigen::Vector2d> closed_offsets) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < closed_offsets.size(); ++i) {
    const auto& a = closed_offsets[i];
    const auto& b = closed_offsets[i + 1];
    total += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

}  // namespace nhs
