#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nhscatter/barrier.hpp"
#include "nhscatter/reference_values.hpp"

using namespace nhs;

namespace {

constexpr double kE1 = 16.052461577163;
constexpr double kV1 = 14.1104958749715;

double extended_m(double e, double v, double b) {
  const auto tm = transfer_matrix(Extended(e), Barrier<Extended>{Extended(0), Extended(v), Extended(b)});
  return static_cast<double>(abs_squared<Extended>(tm.m22()));
}

// Rectangular real barrier of height v0 and width b, textbook transmission.
double textbook_transmission(double e, double v0, double b) {
  if (e > v0) {
    const double s = std::sin(std::sqrt(e - v0) * b);
    return 1.0 / (1.0 + v0 * v0 * s * s / (4 * e * (e - v0)));
  }
  const double sh = std::sinh(std::sqrt(v0 - e) * b);
  return 1.0 / (1.0 + v0 * v0 * sh * sh / (4 * e * (v0 - e)));
}

bool is_identity(const TransferMatrix<double>& m, double tol) {
  return std::abs(m.m11() - 1.0) < tol && std::abs(m.m22() - 1.0) < tol &&
         std::abs(m.m12()) < tol && std::abs(m.m21()) < tol;
}

}  // namespace

TEST_CASE("wave numbers") {
  SUBCASE("free particle") {
    const auto w = wave_numbers(16.0, Barrier<double>{0, 0, 1});
    CHECK(w.k == doctest::Approx(4.0));
    CHECK(std::abs(w.mu - 1.0) < 1e-15);
    CHECK(std::abs(w.u_plus - std::complex<double>(0, 1)) < 1e-15);
    CHECK(std::abs(w.u_minus) < 1e-15);
  }
  SUBCASE("pure imaginary barrier against direct complex arithmetic") {
    const auto w = wave_numbers(kE1, Barrier<double>::pure_imaginary(kV1, 1));
    const std::complex<double> mu = std::sqrt(std::complex<double>(1.0, -kV1 / kE1));
    const std::complex<double> i(0, 1);
    CHECK(std::abs(w.mu - mu) < 1e-14);
    CHECK(std::abs(w.u_plus - 0.5 * i * (mu + 1.0 / mu)) < 1e-14);
    CHECK(std::abs(w.u_minus - 0.5 * i * (mu - 1.0 / mu)) < 1e-14);
    const auto pp = polar_params(kE1, kV1, 1.0);
    CHECK(std::norm(w.mu) == doctest::Approx(pp.rho * pp.rho / (pp.k * pp.k)).epsilon(1e-14));
  }
  SUBCASE("energy at a real barrier height") {
    CHECK_THROWS_AS(wave_numbers(10.0, Barrier<double>{10, 0, 1}), DegenerateInputError);
  }
  SUBCASE("non-positive energy") {
    CHECK_THROWS_AS(wave_numbers(0.0, Barrier<double>{0, 1, 1}), DomainError);
    CHECK_THROWS_AS(wave_numbers(-1.0, Barrier<double>{0, 1, 1}), DomainError);
  }
}

TEST_CASE("transfer matrix") {
  SUBCASE("zero width is the identity") {
    for (double e : {0.3, 5.0, 123.0}) {
      CHECK(is_identity(transfer_matrix(e, Barrier<double>{3, 7, 0}), 1e-15));
    }
  }
  SUBCASE("vanishing potential is the identity") {
    CHECK(is_identity(transfer_matrix(16.0, Barrier<double>{0, 0, 1}), 1e-14));
  }
  SUBCASE("negative width") {
    CHECK_THROWS_AS(transfer_matrix(1.0, Barrier<double>{0, 1, -1}), DomainError);
  }
  SUBCASE("first tabulated singularity") {
    CHECK(std::abs(transfer_matrix(kE1, Barrier<double>::pure_imaginary(kV1, 1)).m22()) < 1e-10);
  }
  SUBCASE("unimodular") {
    const auto m = transfer_matrix(20.0, Barrier<double>::pure_imaginary(10, 1));
    CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
  }
  SUBCASE("independent of the sign of k'") {
    for (const auto& bar : {Barrier<double>{0, 10, 1}, Barrier<double>{6.15055, 35, 10},
                            Barrier<double>{16, 0, 1}, Barrier<double>{40, -3, 0.5}}) {
      const auto a = transfer_matrix(25.0, bar, Branch::principal);
      const auto b = transfer_matrix(25.0, bar, Branch::negated);
      const double scale = a.elements.cwiseAbs().maxCoeff();
      CHECK((a.elements - b.elements).cwiseAbs().maxCoeff() < 1e-13 * scale);
    }
  }
  SUBCASE("extended agrees with double") {
    const auto d = transfer_matrix(20.0, Barrier<double>{1.5, 10, 1});
    const auto x = transfer_matrix(Extended(20), Barrier<Extended>{Extended(1.5), Extended(10), Extended(1)});
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const std::complex<double> xe(static_cast<double>(x.elements(r, c).real()),
                                      static_cast<double>(x.elements(r, c).imag()));
        CHECK(std::abs(d.elements(r, c) - xe) < 1e-13 * std::abs(xe));
      }
    }
  }
}

TEST_CASE("polar parameters") {
  SUBCASE("Hermitian limit") {
    const auto pp = polar_params(16.0, 1e-12, 1.0);
    CHECK(std::abs(pp.theta) < 1e-13);
    CHECK(pp.rho == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(pp.alpha) < 1e-12);
    CHECK(pp.beta == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(pp.y_minus) < 1e-14);
    CHECK(pp.y_plus == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("equal E and V") {
    CHECK(polar_params(10.0, 10.0, 1.0).theta == doctest::Approx(std::numbers::pi / 8));
  }
  SUBCASE("y identity") {
    const auto pp = polar_params(kE1, kV1, 1.0);
    CHECK(pp.rho == doctest::Approx(std::pow(kE1 * kE1 + kV1 * kV1, 0.25)).epsilon(1e-15));
    CHECK(std::abs(pp.y_plus * pp.y_plus - pp.y_minus * pp.y_minus - 1.0) < 1e-14);
  }
  SUBCASE("rejects non-positive height") {
    CHECK_THROWS_AS(polar_params(1.0, 0.0, 1.0), DomainError);
  }
}

TEST_CASE("Q decomposition of M") {
  SUBCASE("Hermitian limit") {
    const auto q = q_decomposition(16.0, 1e-12, 1.0);
    CHECK(q.terms[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(q.terms[1]) < 1e-12);
    CHECK(std::abs(q.terms[2]) < 1e-12);
    CHECK(std::abs(q.terms[3]) < 1e-12);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("vanishes at the first singularity") {
    CHECK(m_magnitude(kE1, kV1, 1.0).value < 1e-20);
  }
  SUBCASE("matches the matrix element") {
    const auto m = transfer_matrix(20.0, Barrier<double>::pure_imaginary(10, 1)).m22();
    CHECK(q_decomposition(20.0, 10.0, 1.0).value == doctest::Approx(std::norm(m)).epsilon(1e-12));
  }
  SUBCASE("escalates under cancellation") {
    const auto near = m_magnitude(kE1 + 1e-4, kV1, 1.0);
    CHECK(near.extended);
    CHECK(near.value == doctest::Approx(extended_m(kE1 + 1e-4, kV1, 1.0)).epsilon(1e-12));
    CHECK_FALSE(m_magnitude(20.0, 10.0, 1.0).extended);
    CHECK(m_magnitude(20.0, 10.0, 1.0, PrecisionMode::extended).extended);
  }
}

TEST_CASE("P factor") {
  CHECK(p_factor(16.0, 1e-12, 1.0) < 1e-20);
  const auto m = transfer_matrix(20.0, Barrier<double>::pure_imaginary(10, 1)).m21();
  CHECK(p_factor(20.0, 10.0, 1.0) == doctest::Approx(std::norm(m)).epsilon(1e-12));
  for (const auto& row : reference::kUnitWidth) {
    CHECK(std::abs(p_factor(row.e_ss, row.v_ss, 1.0) - 1.0) < 1e-8);
  }
}

TEST_CASE("transmission and reflection") {
  SUBCASE("free particle") {
    const auto sp = scattering(16.0, Barrier<double>{0, 0, 1});
    CHECK(sp.t_value == doctest::Approx(1.0));
    CHECK(sp.r_value < 1e-28);
    CHECK_FALSE(sp.s_value.has_value());
  }
  SUBCASE("real barrier against the textbook formula") {
    const auto sp = scattering(25.0, Barrier<double>{16, 0, 1});
    CHECK(std::abs(sp.t_value + sp.r_value - 1.0) < 1e-12);
    CHECK(sp.t_value == doctest::Approx(textbook_transmission(25, 16, 1)).epsilon(1e-13));
    const auto tunnel = scattering(4.0, Barrier<double>{9, 0, 1.5});
    CHECK(tunnel.t_value == doctest::Approx(textbook_transmission(4, 9, 1.5)).epsilon(1e-13));
  }
  SUBCASE("both diverge next to a singularity") {
    const auto sp = scattering(kE1 + 1e-6, Barrier<double>::pure_imaginary(kV1, 1));
    CHECK(sp.t_value > 1e9);
    CHECK(sp.r_value > 1e9);
    CHECK(sp.r_value / sp.t_value == doctest::Approx(1.0).epsilon(1e-5));
    REQUIRE(sp.route_discrepancy.has_value());
  }
  SUBCASE("routes agree for pure imaginary barriers") {
    const auto sp = scattering(20.0, Barrier<double>::pure_imaginary(10, 1));
    REQUIRE(sp.route_discrepancy.has_value());
    CHECK(*sp.route_discrepancy < 1e-12);
    CHECK(sp.s_value.value() == doctest::Approx(1.0 / sp.r_value));
  }
}

TEST_CASE("properties on random samples") {
  std::mt19937_64 rng(20261016);

  SUBCASE("unimodular where the entries stay moderate") {
    std::uniform_real_distribution<double> e(0.5, 200), v1(-50, 50), v2(-30, 30), b(0.05, 2);
    int n = 0;
    double worst = 0;
    while (n < 10000) {
      const Barrier<double> bar{v1(rng), v2(rng), b(rng)};
      const auto w = wave_numbers(e(rng), bar);
      if (std::abs(w.k_prime.imag()) * bar.width_b > 3) {
        continue;
      }
      ++n;
      worst = std::max(worst, std::abs(transfer_matrix(w, bar.width_b).determinant() - 1.0));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("unimodular in extended precision everywhere") {
    std::uniform_real_distribution<double> e(0.5, 200), v1(-50, 50), v2(-30, 30), b(0.05, 2);
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
      const Barrier<Extended> bar{Extended(v1(rng)), Extended(v2(rng)), Extended(b(rng))};
      const auto m = transfer_matrix(Extended(e(rng)), bar);
      worst = std::max(worst, static_cast<double>(abs(m.determinant() - ExtendedComplex(1))));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("flux conservation for real barriers") {
    std::uniform_real_distribution<double> e(0.1, 200), v0(-50, 50), b(0.05, 3);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const double ei = e(rng);
      const double vi = v0(rng);
      if (std::abs(ei - vi) < 1e-3) {
        continue;
      }
      const auto sp = scattering(ei, Barrier<double>{vi, 0, b(rng)});
      worst = std::max(worst, std::abs(sp.t_value + sp.r_value - 1.0));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("Q sum against an extended |m22|^2 oracle") {
    std::uniform_real_distribution<double> e(1, 1200), v(0.5, 250), b(0.2, 3);
    int n = 0;
    double worst = 0;
    while (n < 10000) {
      const double ei = e(rng), vi = v(rng), bi = b(rng);
      const double oracle = extended_m(ei, vi, bi);
      if (!(oracle > 1e-10)) {
        continue;
      }
      ++n;
      worst = std::max(worst, std::abs(m_magnitude(ei, vi, bi).value - oracle) / oracle);
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("compensated sum") {
  CompensatedSum<double> s;
  s += 1.0;
  s += 1e100;
  s += 1.0;
  s += -1e100;
  CHECK(s.value() == 2.0);

  CompensatedSum<double> tenths;
  for (int i = 0; i < 1000; ++i) {
    tenths += 0.1;
  }
  CHECK(tenths.value() == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(std::abs(tenths.value() - 100.0) <= std::abs(100.0 * 1e-16) + 1e-13);
}
