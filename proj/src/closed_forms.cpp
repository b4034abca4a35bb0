#include "nhscatter/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nhscatter/finite_difference.hpp"
#include "nhscatter/local_conic.hpp"

namespace nhs {
namespace {

// Every symbol the closed-form expressions use, evaluated once.
struct Symbols {
  double E, V, b;
  double k, k2, k3, k4, k5, k6, k8;
  double rho, r2, r4, r6, r8;
  double th, s, c;  // theta, sin theta, cos theta
  double alpha, beta;
  double yp, ym;
  double g, h, f, p;
  double ch2a, sh2a, c2b, s2b;
  double s2t, c2t, s4t, c4t, s3t, c3t;

  Symbols(double e, double v, double width) : E(e), V(v), b(width) {
    const auto pp = polar_params(e, v, width);
    k = pp.k;
    k2 = k * k;
    k3 = k2 * k;
    k4 = k2 * k2;
    k5 = k4 * k;
    k6 = k4 * k2;
    k8 = k4 * k4;
    rho = pp.rho;
    r2 = rho * rho;
    r4 = r2 * r2;
    r6 = r4 * r2;
    r8 = r4 * r4;
    th = pp.theta;
    s = std::sin(th);
    c = std::cos(th);
    alpha = pp.alpha;
    beta = pp.beta;
    yp = pp.y_plus;
    ym = pp.y_minus;
    g = pp.g;
    h = pp.h;
    f = pp.f;
    p = pp.p;
    ch2a = std::cosh(2 * alpha);
    sh2a = std::sinh(2 * alpha);
    c2b = std::cos(2 * beta);
    s2b = std::sin(2 * beta);
    s2t = std::sin(2 * th);
    c2t = std::cos(2 * th);
    s4t = std::sin(4 * th);
    c4t = std::cos(4 * th);
    s3t = std::sin(3 * th);
    c3t = std::cos(3 * th);
  }
};

double relative(double closed, double numeric) {
  const double denom = std::max(std::abs(numeric), std::numeric_limits<double>::min());
  return std::abs(closed - numeric) / denom;
}

}  // namespace

const ClosedFormEntry* ClosedFormReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) {
      return &e;
    }
  }
  return nullptr;
}

namespace closed_form {

double d2q1_de2(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double E = y.E, V = y.V, b = y.b;
  const double t1 = y.ch2a / (8 * y.k6 * std::pow(y.rho, 10)) *
                    (std::pow(V, 4) * (3 * y.k4 + 2 * y.r4) - 2 * y.k6 * y.r2 * V * V * y.c2t -
                     4 * y.k8 * y.r2 * V * y.s2t);
  const double t2 = b / (16 * y.k2 * std::pow(y.rho, 9)) *
                    (std::pow(y.k2 + y.r2, 2) + 4 * y.k2 * y.r2 * y.c * y.c) *
                    (2 * y.g * y.g * b * y.rho * y.ch2a +
                     y.sh2a * (2 * y.k2 * V * y.c - (E * E - V * V) * y.s));
  const double t3 = b * y.sh2a / (4 * y.k4 * std::pow(y.rho, 9)) * y.g * V *
                    (V * V * V - 2 * y.k4 * y.r2 * y.s2t);
  return t1 + t2 + t3;
}

double d2q2_de2(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double E = y.E, V = y.V, b = y.b;
  const double t1 = b / (16 * y.k2 * std::pow(y.rho, 9)) *
                    (std::pow(y.k2 - y.r2, 2) - 4 * y.k2 * y.r2 * y.s * y.s) *
                    (2 * y.h * y.h * b * y.rho * y.c2b -
                     y.s2b * ((E * E - V * V) * y.c + 2 * E * V * y.s));
  const double t2 = V * y.c2b / (8 * y.k6 * std::pow(y.rho, 10)) *
                    (V * V * V * (3 * y.k4 + 2 * y.r4) - 2 * y.k6 * y.r2 * V * y.c2t -
                     4 * y.k8 * y.r2 * y.s2t);
  const double t3 = b * y.h / (4 * y.k4 * std::pow(y.rho, 9)) * V * y.s2b *
                    (V * V * V - 2 * y.k4 * y.r2 * y.s2t);
  return t1 - t2 - t3;
}

double d2q3_de2(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double V = y.V, b = y.b;
  const double b2 = b * b;
  const double bracket =
      4 * b2 * y.k8 * y.r2 * y.c * y.c * y.s * y.s2b -
      2 * y.k2 * V * y.s2b * y.c *
          (3 * y.k4 + 2 * y.k2 * y.r2 + y.r4 - 4 * b2 * y.k4 * y.r2 * y.s * y.s) +
      y.s2b * y.s *
          (4 * b2 * y.k4 * y.r2 * V * V * y.s * y.s - 5 * y.k8 - 8 * y.k6 * y.r2 -
           4 * y.k2 * y.r6 - 3 * y.r8 + y.k4 * (V * V - 4 * y.r4)) +
      b * y.k2 * y.rho * y.c2b *
          (4 * y.k4 * V * y.c * y.c +
           4 * V * y.s * y.s * (2 * y.k4 + 2 * y.k2 * y.r2 + y.r4) +
           y.k2 * y.s2t * (5 * y.k4 + 4 * y.k2 * y.r2 + 3 * V * V));
  return (y.r2 - y.k2) / (8 * y.k5 * std::pow(y.rho, 9)) * bracket;
}

double d2q4_de2(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double V = y.V, b = y.b;
  const double b2 = b * b;
  const double bracket =
      4 * b * y.k2 * y.rho * y.ch2a *
          ((2 * y.k4 - 2 * y.k2 * y.r2 + y.r4) * V * y.c * y.c + y.k4 * V * y.s * y.s +
           y.k4 * y.s2t / 4 * (4 * y.k2 * y.r2 - 5 * y.k4 - 3 * V * V)) +
      y.c * y.sh2a *
          (std::pow(y.k2 - y.r2, 2) * (5 * y.k4 + 2 * y.k2 * y.r2 + 3 * y.r4) -
           y.k4 * V * V) +
      4 * b2 * y.k4 * y.r2 * V * V * y.sh2a * y.c * y.c * y.c +
      4 * b2 * y.k8 * y.r2 * y.c * y.s * y.s * y.sh2a -
      2 * y.k2 * V * y.s * y.sh2a *
          (3 * y.k4 - 2 * y.k2 * y.r2 + y.r4 + 4 * b2 * y.k4 * y.r2 * y.c * y.c);
  return -(y.r2 + y.k2) / (8 * y.k5 * std::pow(y.rho, 9)) * bracket;
}

double d2m_dv2(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double E = y.E, V = y.V, b = y.b, rho = y.rho;
  const double yp = y.yp, ym = y.ym, g = y.g, h = y.h;
  const double mixed = (E * E - V * V) * y.c + 2 * E * V * y.s;
  // The expression contains an undefined "r^4"; rho^4 is used.
  const double r4 = y.r4;
  const double sum =
      2 * y.s2b * y.s * (V * V * (ym + 4 * yp) - 2 * y.r4 * yp) -
      4 * V * yp * (E * y.c * y.s2b + 2 * b * rho * y.c2b * y.s * g) -
      b * rho * (1 - 2 * ym * ym - y.c2t) * (2 * b * rho * g * g * y.c2b + y.s2b * mixed) +
      8 * ym * b * E * rho * y.c2b * y.c * g - 2 * ym * E * y.s2b * (3 * V + y.f) -
      4 * ym * b * rho * y.s * (2 * g * g * b * rho * y.s2b - y.c2b * mixed) -
      2 * (y.ch2a - y.c2b) *
          (3.0 / (2.0 * std::numbers::sqrt2) * E * V * V - E * E * y.c2t + 2 * E * V * y.s2t) +
      2 * E * yp * y.sh2a * (y.p - 3 * V * y.s) -
      4 * b * rho * h * y.sh2a * (2 * V * ym * yp + E * y.s2t) +
      4 * E * y.s * (2 * b * rho * yp * h * y.ch2a - V * ym * y.sh2a) -
      4 * b * rho * y.s2b * g * (2 * V * ym * yp + E * y.s2t) +
      2 * b * rho * (yp * yp + y.c * y.c) *
          (2 * h * h * b * rho * y.ch2a -
           y.sh2a * (2 * E * V * y.c - (E * E - V * V) * y.s * y.s)) +
      8 * b * h * rho * ym * V * y.c * y.ch2a +
      2 * y.c * y.sh2a * (2 * r4 * ym - V * V * (4 * ym + yp)) -
      4 * b * rho * yp * y.c *
          (2 * b * rho * h * h * y.sh2a - y.ch2a * (2 * E * V * y.c - (E * E - V * V) * y.s));
  return sum / (8 * y.r8);
}

double g_terms(int i, double e, double v, double width) {
  const Symbols y(e, v, width);
  const double V = y.V, b = y.b, k = y.k;
  const double b2 = b * b;
  const double k2 = y.k2, k3 = y.k3, k4 = y.k4, k5 = y.k5, k6 = y.k6, k8 = y.k8;
  const double r2 = y.r2, r4 = y.r4, r6 = y.r6, r8 = y.r8;
  const double V2 = V * V, V3 = V2 * V;
  switch (i) {
    case 1:
      return 2 * b2 * k6 * r4 * V * y.c2t * y.c2t +
             k3 * r2 * V * y.c2t *
                 (2 * b2 * k3 * (k2 - 2 * r2) + b2 * k * V2 + 2 * b * V * (k2 + r2) - 2 * k3) -
             2 * b * k5 * r2 * (-k4 + k2 * r2 + 2 * V2) + V3 * (3 * k4 + r4);
    case 2:
      return b2 * k3 * r2 * y.s4t * (V2 - k4) -
             y.s2t * (b2 * k * (k4 - 4 * k2 * r2 + r4) * (k4 - V2) +
                      2 * b * V * (k2 + r2) * (2 * k4 - r4) + 4 * k3 * (r4 - 2 * V2));
    case 3:
      return -2 * b2 * k6 * r4 * V + 6 * k8 * V - 4 * k4 * r4 * V - 2 * r8 * V +
             2 * b * k3 * r2 * (k6 - k4 * r2 + k2 * (r4 - 5 * V2) + 3 * (r6 - r2 * V2)) +
             k * r2 *
                 (y.s2t * (b2 * k * (k4 + 4 * k2 * r2 + r4) * (k4 - V2) +
                           2 * b * V * (k2 - r2) * (2 * k4 - r4) + 4 * k3 * (r4 - 2 * V2)) -
                  2 * k2 * y.c2t *
                      (b2 * k * V * (k4 + 4 * k2 * r2 + r4) +
                       b * (k6 + 3 * k4 * r2 - k2 * r4 + V2 * (3 * k2 + r2) - 3 * r6) -
                       2 * k3 * V) +
                  b2 * k3 * r2 * y.s4t * (k4 - V2) - 2 * b2 * k5 * r2 * V * y.c4t);
    case 4:
      return 2 * b * k3 * r2 * y.c3t * (k3 * V - b * (k2 - r2) * (k4 - V2)) +
             2 * y.c *
                 (k3 * (k2 - r2) * (-2 * k2 * r2 - 3 * r4 + k4 * (-1 + b2 * r2)) +
                  b * V * (-3 * k8 + k6 * r2 + 2 * k4 * r4 - r8) +
                  k3 * V2 * (-r2 * (b2 * k2 + 3) + b2 * r4 + 5 * k2)) +
             k * y.s *
                 (2 * V * (6 * k6 + 2 * k4 * r2 - k2 * r4 + r6) +
                  b * k * (k8 - 3 * k4 * r4 - 8 * k2 * r6 - V2 * (5 * k4 - 16 * k2 * r2 + r4) +
                           4 * r8) -
                  2 * b * k3 * r2 * y.c2t * (4 * b * k * V * (k2 - r2) + 3 * k4 - 2 * r4 + V2));
    case 5:
      return -2 * y.s *
                 (k3 * (k2 + r2) * (k2 * r2 * (b2 * k2 - 2) + k4 + 3 * r4) +
                  b * V * (3 * k8 + k6 * r2 - 2 * k4 * r4 + r8) -
                  k3 * V2 * (r2 * (b2 * k2 + 3) + b2 * r4 + 5 * k2)) +
             k * y.c *
                 (-b * k * (k8 - 3 * k6 * r2 - 3 * k4 * r4 + 10 * k2 * r6 + 4 * r8) +
                  b * k * V2 * (5 * k4 + 17 * k2 * r2 + r4) +
                  2 * V * (2 * k6 * (b2 * r2 - 3) + 2 * k4 * (b2 * r4 + r2) + k2 * r4 + r6)) +
             b * k4 * r2 * y.c3t * (4 * b * k * V * (k2 + r2) + 3 * k4 - 2 * r4 + V2) +
             2 * b * k3 * r2 * y.s3t * (k3 * V - b * (k2 + r2) * (k4 - V2));
    default:
      throw DomainError("g_terms index must be 1..5");
  }
}

double d2m_dedv(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double g1 = g_terms(1, e, v, width);
  const double g2 = g_terms(2, e, v, width);
  const double g3 = g_terms(3, e, v, width);
  const double g4 = g_terms(4, e, v, width);
  const double g5 = g_terms(5, e, v, width);
  return ((2 * g1 + y.k * y.r2 * g2) * y.c2b + g3 * y.ch2a +
          y.rho * (g4 * y.s2b + g5 * y.sh2a)) /
         (16 * y.k4 * std::pow(y.rho, 10));
}

double dp_de(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double V = y.V, b = y.b;
  const double reflectivity = y.yp * y.yp - y.c * y.c;
  return (4 * b * std::pow(y.rho, 7) * y.k4 * reflectivity * (y.h * y.s2b - y.g * y.sh2a) +
          y.r4 * V * (y.c2b - y.ch2a) * (V * V * V + 2 * y.k4 * y.r2 * y.s2t)) /
         (8 * y.k4 * std::pow(y.rho, 10));
}

double dp_dv(double e, double v, double width) {
  const Symbols y(e, v, width);
  const double V = y.V, b = y.b;
  const double reflectivity = y.yp * y.yp - y.c * y.c;
  // Keeps sin(2 alpha) in the first bracket as given.
  const double s2a = std::sin(2 * y.alpha);
  return (4 * b * y.rho * y.r2 * y.k2 * reflectivity * (y.h * s2a + y.g * y.s2b) -
          (y.c2b - y.ch2a) * (V * V * V + 2 * y.k4 * y.r2 * y.s2t)) /
         (8 * y.k2 * y.r6);
}

}  // namespace closed_form

PrimedRelation primed_from_relations(double a, double b, double h, double c, double d,
                                     double g1, double g2, double p) {
  const double p2 = p * p;
  return {-c * g1 / p2 + a / p, -d * g2 / p2 + b / p, h / p - (c * g2 + d * g1) / p2};
}

ClosedFormReport closed_form_cross_check(const SpectralSingularity& ss) {
  if (ss.v1_fixed != 0.0) {
    throw DomainError("closed forms exist only for the pure-imaginary barrier");
  }
  const double e = ss.e_ss;
  const double v = ss.v_ss;
  const double b = ss.width_b;
  const double he = 1e-3 * e;
  const double hv = 1e-3 * v;

  ClosedFormReport report;
  const auto add = [&](std::string name, double numeric, double closed) {
    report.entries.push_back({std::move(name), numeric, closed, relative(closed, numeric)});
  };

  for (int i = 0; i < 4; ++i) {
    const auto qi = [&](double x, double w) {
      return q_terms(polar_params(x, w, b))[static_cast<std::size_t>(i)];
    };
    const double numeric = richardson_derivatives(qi, e, v, he, hv).hessian(0, 0);
    double closed = 0;
    switch (i) {
      case 0: closed = closed_form::d2q1_de2(e, v, b); break;
      case 1: closed = closed_form::d2q2_de2(e, v, b); break;
      case 2: closed = closed_form::d2q3_de2(e, v, b); break;
      default: closed = closed_form::d2q4_de2(e, v, b); break;
    }
    add("d2Q" + std::to_string(i + 1) + "/dE2", numeric, closed);
  }

  const auto quad_m = numeric_derivatives(ss, Target::m);
  const auto quad_s = numeric_derivatives(ss, Target::s);
  const double sum_q = closed_form::d2q1_de2(e, v, b) + closed_form::d2q2_de2(e, v, b) +
                       closed_form::d2q3_de2(e, v, b) + closed_form::d2q4_de2(e, v, b);
  add("d2M/dE2", quad_m.hess_ee, sum_q);
  add("d2M/dV2", quad_m.hess_vv, closed_form::d2m_dv2(e, v, b));
  add("d2M/dEdV", quad_m.hess_ev, closed_form::d2m_dedv(e, v, b));

  const auto p_of = [&](double x, double w) { return p_factor(x, w, b); };
  const auto dp = richardson_derivatives(p_of, e, v, he, hv);
  const double g1_closed = closed_form::dp_de(e, v, b);
  const double g2_closed = closed_form::dp_dv(e, v, b);
  add("G1", dp.gradient(0), g1_closed);
  add("G2", dp.gradient(1), g2_closed);

  const auto m = ConicCoefficients::from(quad_m);
  const auto s = ConicCoefficients::from(quad_s);
  const double p = p_factor(e, v, b);
  const auto numeric_rel = primed_from_relations(m.a, m.b, m.h, m.c, m.d, dp.gradient(0),
                                                 dp.gradient(1), p);
  const auto closed_rel = primed_from_relations(m.a, m.b, m.h, m.c, m.d, g1_closed,
                                                 g2_closed, p);
  add("A' relation (numeric G)", s.a, numeric_rel.a_prime);
  add("B' relation (numeric G)", s.b, numeric_rel.b_prime);
  add("H' relation (numeric G)", s.h, numeric_rel.h_prime);
  add("A' relation (closed-form G)", s.a, closed_rel.a_prime);
  add("B' relation (closed-form G)", s.b, closed_rel.b_prime);
  add("H' relation (closed-form G)", s.h, closed_rel.h_prime);
  return report;
}

}  // namespace nhs
