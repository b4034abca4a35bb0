#pragma once

// Rectangular complex barrier V = v1 + i v2 on (0, b), units hbar = 1, 2m = 1.
// Everything here is templated on the real scalar so the same formulas run
// in double and in the 50-digit Extended type.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "nhscatter/compensated_sum.hpp"
#include "nhscatter/errors.hpp"
#include "nhscatter/scalar.hpp"

namespace nhs {

template <typename Real>
struct Barrier {
  Real v1{0};       // real part of the potential height
  Real v2{0};       // imaginary part of the potential height
  Real width_b{1};  // slab width

  static Barrier pure_imaginary(Real v, Real width) { return {Real(0), v, width}; }

  bool is_pure_imaginary() const { return v1 == Real(0) && v2 > Real(0); }
  bool is_real() const { return v2 == Real(0); }

  template <typename Other>
  Barrier<Other> cast() const {
    return {Other(v1), Other(v2), Other(width_b)};
  }
};

template <typename Real>
struct WaveNumbers {
  Real k;                  // sqrt(E)
  Complex<Real> k_prime;   // sqrt(E - V), principal branch
  Complex<Real> mu;        // k' / k
  Complex<Real> u_plus;    // i/2 (mu + 1/mu)
  Complex<Real> u_minus;   // i/2 (mu - 1/mu)
};

/// 2x2 transfer matrix mapping left plane-wave amplitudes to right ones.
template <typename Real>
struct TransferMatrix {
  Matrix2c<Real> elements;

  const Complex<Real>& m11() const { return elements(0, 0); }
  const Complex<Real>& m12() const { return elements(0, 1); }
  const Complex<Real>& m21() const { return elements(1, 0); }
  const Complex<Real>& m22() const { return elements(1, 1); }

  Complex<Real> determinant() const {
    return m11() * m22() - m12() * m21();
  }
};

/// Polar bundle for a pure-imaginary barrier iV.
template <typename Real>
struct PolarParams {
  Real k;
  Real rho;    // (E^2 + V^2)^(1/4)
  Real theta;  // atan(V/E) / 2
  Real alpha;  // b rho sin(theta)
  Real beta;   // b rho cos(theta)
  Real y_plus;
  Real y_minus;
  Real g;
  Real h;
  Real f;
  Real p;
};

/// Q1..Q4 with their compensated sum.
template <typename Real>
struct QSum {
  std::array<Real, 4> terms{};
  Real raw{0};           // compensated sum before clamping
  Real value{0};         // max(raw, 0)
  Real max_abs_term{0};  // cancellation scale
  bool extended = false; // true when re-evaluated in Extended precision
};

template <typename Real>
struct ScatteringPoint {
  Real energy_e;
  Real m_value;  // |m22|^2
  Real p_value;  // |m21|^2
  Real t_value;  // 1 / M
  Real r_value;  // P / M
  std::optional<Real> s_value;  // M / P, absent when P = 0
  // Pure-imaginary barriers only: the larger relative difference between the
  // matrix route and the closed-form route for M and P.
  std::optional<Real> route_discrepancy;
};

enum class Branch { principal, negated };

namespace detail {

template <typename Real>
void require_positive_energy(const Real& e) {
  if (!(e > Real(0))) {
    throw DomainError("energy must be positive");
  }
}

template <typename Real>
void require_valid_width(const Real& b) {
  if (!(b >= Real(0))) {
    throw DomainError("barrier width must be non-negative");
  }
}

}  // namespace detail

template <typename Real>
WaveNumbers<Real> wave_numbers(const Real& energy_e, const Barrier<Real>& barrier,
                               Branch branch = Branch::principal) {
  using std::abs;
  using std::sqrt;
  using C = Complex<Real>;
  detail::require_positive_energy(energy_e);

  WaveNumbers<Real> w;
  w.k = sqrt(energy_e);
  w.k_prime = sqrt(C(energy_e - barrier.v1, -barrier.v2));
  if (branch == Branch::negated) {
    w.k_prime = -w.k_prime;
  }
  w.mu = w.k_prime / C(w.k);
  if (abs(w.mu) < Real(1e-14)) {
    throw DegenerateInputError("E coincides with a real barrier height (mu = 0)");
  }
  const C half_i(Real(0), Real(0.5));
  const C inv_mu = C(Real(1)) / w.mu;
  w.u_plus = half_i * (w.mu + inv_mu);
  w.u_minus = half_i * (w.mu - inv_mu);
  return w;
}

template <typename Real>
TransferMatrix<Real> transfer_matrix(const WaveNumbers<Real>& w, const Real& width_b) {
  using std::cos;
  using std::exp;
  using std::sin;
  using C = Complex<Real>;
  const C phase = w.k_prime * C(width_b);
  const C c = cos(phase);
  const C s = sin(phase);
  const C forward = exp(C(Real(0), w.k * width_b));   // e^{ikb}
  const C backward = exp(C(Real(0), -w.k * width_b)); // e^{-ikb}

  TransferMatrix<Real> m;
  m.elements(0, 0) = (c + w.u_plus * s) * backward;
  m.elements(1, 1) = (c - w.u_plus * s) * forward;
  m.elements(0, 1) = w.u_minus * s * backward;
  m.elements(1, 0) = -w.u_minus * s * forward;
  return m;
}

template <typename Real>
TransferMatrix<Real> transfer_matrix(const Real& energy_e, const Barrier<Real>& barrier,
                                     Branch branch = Branch::principal) {
  detail::require_valid_width(barrier.width_b);
  return transfer_matrix(wave_numbers(energy_e, barrier, branch), barrier.width_b);
}

/// Magnitude of the cos/sin terms that cancel in m22; the natural scale for
/// judging how small |m22| can be resolved.
template <typename Real>
Real m22_term_scale(const Real& energy_e, const Barrier<Real>& barrier) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::max;
  using C = Complex<Real>;
  const auto w = wave_numbers(energy_e, barrier);
  const C phase = w.k_prime * C(barrier.width_b);
  return max(abs(cos(phase)), abs(w.u_plus * sin(phase)));
}

template <typename Real>
PolarParams<Real> polar_params(const Real& energy_e, const Real& v, const Real& width_b) {
  using std::atan2;
  using std::cos;
  using std::sin;
  using std::sqrt;
  detail::require_positive_energy(energy_e);
  if (!(v > Real(0))) {
    throw DomainError("polar parameters need a positive imaginary height");
  }
  PolarParams<Real> p;
  p.k = sqrt(energy_e);
  p.rho = sqrt(sqrt(energy_e * energy_e + v * v));
  p.theta = atan2(v, energy_e) / Real(2);
  const Real st = sin(p.theta);
  const Real ct = cos(p.theta);
  p.alpha = width_b * p.rho * st;
  p.beta = width_b * p.rho * ct;
  const Real k2 = p.k * p.k;
  const Real rho2 = p.rho * p.rho;
  const Real denom = Real(2) * p.k * p.rho;
  p.y_plus = (k2 + rho2) / denom;
  p.y_minus = (k2 - rho2) / denom;
  p.g = v * ct - energy_e * st;
  p.h = v * st + energy_e * ct;
  p.f = v * ct + energy_e * st;
  p.p = energy_e * ct - v * st;
  return p;
}

template <typename Real>
std::array<Real, 4> q_terms(const PolarParams<Real>& pp) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const Real st = sin(pp.theta);
  const Real ct = cos(pp.theta);
  return {
      Real(0.5) * (pp.y_plus * pp.y_plus + ct * ct) * cosh(Real(2) * pp.alpha),
      Real(-0.5) * (pp.y_minus * pp.y_minus - st * st) * cos(Real(2) * pp.beta),
      pp.y_minus * sin(Real(2) * pp.beta) * st,
      -pp.y_plus * sinh(Real(2) * pp.alpha) * ct,
  };
}

/// M = |m22|^2 for the pure-imaginary barrier iv via M = Q1 + Q2 + Q3 + Q4,
/// evaluated in `Real` with compensated summation. Negative roundoff is
/// clamped to zero; the unclamped sum stays in `raw`.
template <typename Real>
QSum<Real> q_decomposition(const Real& energy_e, const Real& v, const Real& width_b) {
  using std::abs;
  using std::max;
  const auto pp = polar_params(energy_e, v, width_b);
  QSum<Real> out;
  out.terms = q_terms(pp);
  CompensatedSum<Real> acc;
  for (const auto& q : out.terms) {
    acc += q;
    out.max_abs_term = max(out.max_abs_term, Real(abs(q)));
  }
  out.raw = acc.value();
  out.value = out.raw < Real(0) ? Real(0) : out.raw;
  return out;
}

/// Fraction of max|Q_i| below which the double evaluation of M is redone in
/// Extended precision.
inline constexpr double kCancellationEscalation = 1e-3;

/// Q-decomposition of M in double. In `standard` mode the result is
/// re-evaluated in Extended precision when |M| < kCancellationEscalation *
/// max|Q_i|; `extended` mode always evaluates in Extended.
inline QSum<double> m_magnitude(double energy_e, double v, double width_b,
                                PrecisionMode mode = PrecisionMode::standard) {
  QSum<double> out;
  if (mode == PrecisionMode::standard) {
    out = q_decomposition(energy_e, v, width_b);
    if (std::abs(out.raw) >= kCancellationEscalation * out.max_abs_term) {
      return out;
    }
  }
  const auto ext = q_decomposition(Extended(energy_e), Extended(v), Extended(width_b));
  for (std::size_t i = 0; i < 4; ++i) {
    out.terms[i] = static_cast<double>(ext.terms[i]);
  }
  out.raw = static_cast<double>(ext.raw);
  out.value = static_cast<double>(ext.value);
  out.max_abs_term = static_cast<double>(ext.max_abs_term);
  out.extended = true;
  return out;
}

/// P = |m21|^2 for the pure-imaginary barrier in closed form.
template <typename Real>
Real p_factor(const Real& energy_e, const Real& v, const Real& width_b) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const auto pp = polar_params(energy_e, v, width_b);
  const Real ct = cos(pp.theta);
  const Real sa = sinh(pp.alpha);
  const Real ca = cosh(pp.alpha);
  const Real sb = sin(pp.beta);
  const Real cb = cos(pp.beta);
  return (pp.y_plus * pp.y_plus - ct * ct) * (sa * sa * cb * cb + ca * ca * sb * sb);
}

template <typename Real>
Real abs_squared(const Complex<Real>& z) {
  using std::imag;
  using std::real;
  const Real re = real(z);
  const Real im = imag(z);
  return re * re + im * im;
}

/// T = 1/M, R = P/M, S = M/P from the transfer matrix. For pure-imaginary
/// barriers M and P are also evaluated through the closed forms and the
/// larger relative difference is reported.
template <typename Real>
ScatteringPoint<Real> scattering(const Real& energy_e, const Barrier<Real>& barrier) {
  using std::abs;
  using std::max;
  const auto tm = transfer_matrix(energy_e, barrier);
  ScatteringPoint<Real> sp;
  sp.energy_e = energy_e;
  sp.m_value = abs_squared<Real>(tm.m22());
  sp.p_value = abs_squared<Real>(tm.m21());
  if (sp.m_value == Real(0)) {
    throw SingularityError("m22 vanishes: transmission and reflection diverge");
  }
  sp.t_value = Real(1) / sp.m_value;
  sp.r_value = sp.p_value / sp.m_value;
  if (sp.p_value > Real(0)) {
    sp.s_value = sp.m_value / sp.p_value;
  }
  if (barrier.is_pure_imaginary() && barrier.width_b > Real(0)) {
    const auto q = q_decomposition(energy_e, barrier.v2, barrier.width_b);
    const Real p = p_factor(energy_e, barrier.v2, barrier.width_b);
    const Real dm = abs(q.value - sp.m_value) / sp.m_value;
    const Real dp = sp.p_value > Real(0) ? Real(abs(p - sp.p_value) / sp.p_value)
                                         : Real(abs(p));
    sp.route_discrepancy = max(dm, dp);
  }
  return sp;
}

}  // namespace nhs
