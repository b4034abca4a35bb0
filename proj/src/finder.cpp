#include "nhscatter/finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nhs {
namespace {

template <typename Real>
using Vec2 = Eigen::Matrix<Real, 2, 1>;

template <typename Real>
Vec2<Real> m22_components(const Real& e, const Real& v, const Real& width_b,
                          const Real& v1) {
  using std::imag;
  using std::real;
  const auto m22 = transfer_matrix(e, Barrier<Real>{v1, v, width_b}).m22();
  return {real(m22), imag(m22)};
}

template <typename Real>
Real jacobian_step(const Real& x) {
  using std::abs;
  using std::max;
  if constexpr (std::is_same_v<Real, double>) {
    return max(1e-6, 1e-7 * abs(x));
  } else {
    return max(Real(1e-20), Real(1e-20) * abs(x));
  }
}

template <typename Real>
struct NewtonResult {
  Real e;
  Real v;
  Real residual;
  int iterations = 0;
};

// Newton on the real 2x2 system (Re m22, Im m22) = 0 with a central-difference
// Jacobian and step halving on residual increase.
template <typename Real>
NewtonResult<Real> newton_m22(Real e, Real v, const Real& width_b, const Real& v1,
                              const Real& step_tol, int max_iter) {
  using std::abs;
  using std::max;
  Vec2<Real> x(e, v);
  Vec2<Real> f = m22_components(x(0), x(1), width_b, v1);
  Real fnorm = f.norm();
  int iter = 0;
  for (; iter < max_iter && fnorm > Real(0); ++iter) {
    Eigen::Matrix<Real, 2, 2> jac;
    for (int j = 0; j < 2; ++j) {
      const Real h = jacobian_step(x(j));
      Vec2<Real> xp = x;
      Vec2<Real> xm = x;
      xp(j) += h;
      xm(j) -= h;
      jac.col(j) = (m22_components(xp(0), xp(1), width_b, v1) -
                    m22_components(xm(0), xm(1), width_b, v1)) /
                   (Real(2) * h);
    }
    if (jac.determinant() == Real(0)) {
      break;
    }
    const Vec2<Real> step = -jac.inverse() * f;

    Real lambda(1);
    bool improved = false;
    Vec2<Real> trial;
    Vec2<Real> ftrial;
    for (int halvings = 0; halvings < 40; ++halvings) {
      trial = x + lambda * step;
      if (trial(0) > Real(0)) {
        ftrial = m22_components(trial(0), trial(1), width_b, v1);
        if (ftrial.norm() < fnorm) {
          improved = true;
          break;
        }
      }
      lambda /= Real(2);
    }
    if (!improved) {
      break;  // at the roundoff floor
    }
    const Vec2<Real> taken = trial - x;
    x = trial;
    f = ftrial;
    fnorm = f.norm();
    if (abs(taken(0)) <= step_tol * max(Real(1), Real(abs(x(0)))) &&
        abs(taken(1)) <= step_tol * max(Real(1), Real(abs(x(1))))) {
      ++iter;
      break;
    }
  }
  return {x(0), x(1), fnorm, iter};
}

double grid_coordinate(const std::array<double, 2>& range, int n, int i) {
  return range[0] + (range[1] - range[0]) * static_cast<double>(i) / (n - 1);
}

}  // namespace

double SpectralSingularity::k_ss() const { return std::sqrt(e_ss); }

void SearchConfig::validate(BarrierMode mode) const {
  const auto ordered = [](const std::array<double, 2>& r) {
    return std::isfinite(r[0]) && std::isfinite(r[1]) && r[1] > r[0];
  };
  // Real barrier heights may be negative; energies and imaginary heights not.
  const bool v_signed = mode == BarrierMode::real;
  if (!ordered(e_range) || !(e_range[0] > 0) || !ordered(v_range) ||
      !(v_signed || v_range[0] > 0)) {
    throw DomainError("search ranges must be positive and ordered");
  }
  if (grid_e < 16 || grid_v < 16) {
    throw DomainError("search grid needs at least 16 points per axis");
  }
  if (max_iter < 1 || !(newton_tol > 0)) {
    throw DomainError("newton settings must be positive");
  }
}

Barrier<double> ScanTarget::barrier_at(double v) const {
  switch (mode) {
    case BarrierMode::pure_imaginary:
      return {0.0, v, width_b};
    case BarrierMode::general:
      return {v1_fixed, v, width_b};
    case BarrierMode::real:
      return {v, 0.0, width_b};
  }
  return {};
}

std::vector<SeedPoint> scan_candidates(const SearchConfig& config, const ScanTarget& target) {
  config.validate(target.mode);
  const int ne = config.grid_e;
  const int nv = config.grid_v;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(static_cast<std::size_t>(ne) * nv, inf);
  const auto at = [&](int i, int j) -> double& {
    return grid[static_cast<std::size_t>(i) * nv + j];
  };
  for (int i = 0; i < ne; ++i) {
    const double e = grid_coordinate(config.e_range, ne, i);
    for (int j = 0; j < nv; ++j) {
      const double v = grid_coordinate(config.v_range, nv, j);
      try {
        at(i, j) = abs_squared<double>(transfer_matrix(e, target.barrier_at(v)).m22());
      } catch (const DegenerateInputError&) {
        // E equals a real height on this node; leave it at +inf.
      }
    }
  }

  std::vector<SeedPoint> seeds;
  for (int i = 1; i + 1 < ne; ++i) {
    for (int j = 1; j + 1 < nv; ++j) {
      const double centre = at(i, j);
      if (!std::isfinite(centre) || centre >= config.absolute_threshold) {
        continue;
      }
      bool is_min = true;
      double neighbourhood_max = centre;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) {
            continue;
          }
          const double other = at(i + di, j + dj);
          // Ties go to the first node in raster order so plateaus yield one seed.
          const bool earlier = di < 0 || (di == 0 && dj < 0);
          if (other < centre || (earlier && other == centre)) {
            is_min = false;
            break;
          }
          neighbourhood_max = std::max(neighbourhood_max, other);
        }
      }
      if (is_min && centre < config.relative_threshold * neighbourhood_max) {
        seeds.push_back({grid_coordinate(config.e_range, ne, i),
                         grid_coordinate(config.v_range, nv, j), centre});
      }
    }
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const SeedPoint& a, const SeedPoint& b) { return a.e < b.e; });
  return seeds;
}

double residual_tolerance(double e, double v, double width_b, double v1_fixed) {
  double scale = 1.0;
  try {
    scale = m22_term_scale(e, Barrier<double>{v1_fixed, v, width_b});
  } catch (const Error&) {
  }
  return 1e-12 * std::max(1.0, scale);
}

SpectralSingularity refine_root(const SeedPoint& seed, double width_b, double v1_fixed,
                                const SearchConfig& config) {
  if (!(width_b > 0)) {
    throw DomainError("barrier width must be positive");
  }
  if (!(seed.e > 0)) {
    throw DomainError("seed energy must be positive");
  }
  const auto r = newton_m22<double>(seed.e, seed.v, width_b, v1_fixed, config.newton_tol,
                                    config.max_iter);
  SpectralSingularity ss;
  ss.e_ss = r.e;
  ss.v_ss = r.v;
  ss.v1_fixed = v1_fixed;
  ss.width_b = width_b;
  ss.residual = r.residual;
  ss.iterations = r.iterations;
  ss.converged = std::isfinite(r.residual) && r.e > 0 && r.v > 0 &&
                 r.residual < residual_tolerance(r.e, r.v, width_b, v1_fixed);
  if (!ss.converged) {
    std::ostringstream msg;
    msg << "newton refinement from (" << seed.e << ", " << seed.v
        << ") did not reach a singularity; best |m22| = " << r.residual << " at ("
        << r.e << ", " << r.v << ")";
    throw ConvergenceError(msg.str(), r.e, r.v, r.residual);
  }
  return ss;
}

ExtendedRoot refine_root_extended(const SpectralSingularity& ss) {
  const auto r = newton_m22<Extended>(Extended(ss.e_ss), Extended(ss.v_ss),
                                      Extended(ss.width_b), Extended(ss.v1_fixed),
                                      Extended(1e-45), 60);
  const Extended gate =
      Extended(1e-40) *
      std::max(Extended(1), m22_term_scale(r.e, Barrier<Extended>{Extended(ss.v1_fixed), r.v,
                                                                  Extended(ss.width_b)}));
  if (!(r.residual < gate)) {
    throw ConvergenceError("extended-precision polish did not converge",
                           static_cast<double>(r.e), static_cast<double>(r.v),
                           static_cast<double>(r.residual));
  }
  return {r.e, r.v, r.residual};
}

bool same_root(const SpectralSingularity& a, const SpectralSingularity& b) {
  const auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-6 * std::max(std::abs(x), std::abs(y));
  };
  return close(a.e_ss, b.e_ss) && close(a.v_ss, b.v_ss);
}

std::vector<SpectralSingularity> find_in_window(const SearchConfig& config,
                                                const ScanTarget& target) {
  const auto seeds = scan_candidates(config, target);
  const double v1 = target.mode == BarrierMode::general ? target.v1_fixed : 0.0;
  const double de = (config.e_range[1] - config.e_range[0]) / (config.grid_e - 1);
  const double dv = (config.v_range[1] - config.v_range[0]) / (config.grid_v - 1);

  std::vector<SpectralSingularity> roots;
  if (target.mode == BarrierMode::real) {
    return roots;  // a candidate here would contradict unitarity; nothing to refine
  }
  for (const auto& seed : seeds) {
    SpectralSingularity ss;
    try {
      ss = refine_root(seed, target.width_b, v1, config);
    } catch (const ConvergenceError&) {
      continue;
    }
    const bool inside = ss.e_ss >= config.e_range[0] - de && ss.e_ss <= config.e_range[1] + de &&
                        ss.v_ss >= config.v_range[0] - dv && ss.v_ss <= config.v_range[1] + dv;
    if (!inside) {
      continue;
    }
    const bool duplicate = std::any_of(roots.begin(), roots.end(),
                                       [&](const SpectralSingularity& r) { return same_root(r, ss); });
    if (!duplicate) {
      roots.push_back(ss);
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const SpectralSingularity& a, const SpectralSingularity& b) { return a.e_ss < b.e_ss; });
  for (std::size_t i = 0; i < roots.size(); ++i) {
    roots[i].index = static_cast<int>(i) + 1;
  }
  return roots;
}

Enumeration enumerate_table(double width_b, int count, const SearchConfig& base) {
  if (!(width_b > 0)) {
    throw DomainError("barrier width must be positive");
  }
  if (count < 1) {
    throw DomainError("count must be at least 1");
  }
  // E b^2 and V b^2 are the dimensionless combinations.
  const double scale = 1.0 / (width_b * width_b);
  SearchConfig config = base;
  config.e_range = {base.e_range[0] * scale, base.e_range[1] * scale};
  config.v_range = {base.v_range[0] * scale, base.v_range[1] * scale};
  const ScanTarget target{BarrierMode::pure_imaginary, width_b, 0.0};

  Enumeration out;
  constexpr int kMaxWidenings = 3;
  for (int attempt = 0;; ++attempt) {
    out.singularities = find_in_window(config, target);
    if (static_cast<int>(out.singularities.size()) >= count || attempt == kMaxWidenings) {
      break;
    }
    config.e_range[1] *= 2;
    config.v_range[1] *= 2;
    config.grid_e *= 2;
    config.grid_v *= 2;
  }
  if (static_cast<int>(out.singularities.size()) > count) {
    out.singularities.resize(static_cast<std::size_t>(count));
  } else if (static_cast<int>(out.singularities.size()) < count) {
    std::ostringstream msg;
    msg << "found " << out.singularities.size() << " of " << count
        << " requested singularities; search window exhausted at E <= " << config.e_range[1]
        << ", V <= " << config.v_range[1];
    out.warning = msg.str();
  }
  return out;
}

}  // namespace nhs
