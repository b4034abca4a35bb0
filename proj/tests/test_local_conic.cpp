#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhscatter/closed_forms.hpp"
#include "nhscatter/finder.hpp"
#include "nhscatter/finite_difference.hpp"
#include "nhscatter/local_conic.hpp"
#include "nhscatter/reference_values.hpp"

using namespace nhs;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SpectralSingularity table_row(int index) {
  const auto& row = reference::kUnitWidth[static_cast<std::size_t>(index - 1)];
  return refine_root({row.e_ss, row.v_ss, 0}, 1.0, 0.0);
}

}  // namespace

TEST_CASE("Richardson derivatives of a known polynomial") {
  const auto f = [](double x, double y) {
    return 3 * x * x - 2 * x * y + 5 * y * y + 0.5 * x * x * x * y + 7 * x - y;
  };
  const double x = 1.3, y = -0.4;
  const auto d = richardson_derivatives(f, x, y, 1e-2, 1e-2);
  CHECK(d.gradient(0) == doctest::Approx(6 * x - 2 * y + 1.5 * x * x * y + 7).epsilon(1e-9));
  CHECK(d.gradient(1) == doctest::Approx(-2 * x + 10 * y + 0.5 * x * x * x - 1).epsilon(1e-9));
  CHECK(d.hessian(0, 0) == doctest::Approx(6 + 3 * x * y).epsilon(1e-9));
  CHECK(d.hessian(1, 1) == doctest::Approx(10).epsilon(1e-9));
  CHECK(d.hessian(0, 1) == doctest::Approx(-2 + 1.5 * x * x).epsilon(1e-9));
  CHECK(d.hessian(0, 1) == d.hessian(1, 0));
  CHECK(d.asymmetry < 1e-8);
}

TEST_CASE("Hessians at the first singularity") {
  const auto ss = table_row(1);
  const auto m = numeric_derivatives(ss, Target::m);
  const auto& row = reference::kUnitWidth[0];
  const double scale = reference::kTableScale;
  CHECK(rel(m.hess_ee / 2, row.a_scaled * scale) < 1e-3);
  CHECK(rel(m.hess_vv / 2, row.b_scaled * scale) < 1e-3);
  CHECK(rel(m.hess_ev, row.h_scaled * scale) < 1e-3);
  CHECK(std::abs(m.grad_e) < 1e-8);
  CHECK(std::abs(m.grad_v) < 1e-8);

  const auto s = numeric_derivatives(ss, Target::s);
  CHECK(rel(s.hess_ee, m.hess_ee) < 1e-6);
  CHECK(rel(s.hess_vv, m.hess_vv) < 1e-6);
  CHECK(rel(s.hess_ev, m.hess_ev) < 1e-6);
}

TEST_CASE("gradient vanishes at every tabulated singularity") {
  for (int i = 1; i <= 10; ++i) {
    const auto m = numeric_derivatives(table_row(i), Target::m);
    CHECK_MESSAGE(std::hypot(m.grad_e, m.grad_v) < 1e-8, "SS", i);
  }
}

TEST_CASE("discriminant") {
  SUBCASE("first and last rows") {
    CHECK(rel(conic_analysis(table_row(1)).chi, -2.83207e-5) < 1e-3);
    CHECK(rel(conic_analysis(table_row(10)).chi, -2.77573e-11) < 1e-2);
  }
  SUBCASE("reference tables agree with each other") {
    for (const auto& row : reference::kUnitWidth) {
      const double s = reference::kTableScale;
      const double assembled =
          (row.h_scaled * row.h_scaled - 4 * row.a_scaled * row.b_scaled) * s * s;
      CHECK_MESSAGE(rel(assembled, row.chi) < 1e-3, "SS", row.index);
    }
  }
  SUBCASE("chi equals chi prime") {
    for (int i : {1, 4, 7}) {
      const auto c = conic_analysis(table_row(i));
      CHECK(rel(c.chi_prime, c.chi) < 1e-6);
    }
  }
  SUBCASE("general barrier is elliptic") {
    const auto& ref = reference::kComplexBarrier;
    const auto ss = refine_root({ref.e_ss, ref.v2_ss, 0}, ref.width_b, ref.v1);
    const auto c = conic_analysis(ss);
    CHECK(c.chi < 0);
    CHECK(c.chi_prime < 0);
  }
}

TEST_CASE("numeric derivatives refuse points that are not singularities") {
  SpectralSingularity fake = table_row(1);
  fake.e_ss += 0.5;
  CHECK_THROWS_AS(numeric_derivatives(fake, Target::m), DomainError);
}

TEST_CASE("primed coefficients differ away from a singularity") {
  const auto a = table_row(1);
  const auto b = table_row(2);
  const double e = (a.e_ss + b.e_ss) / 2;
  const double v = (a.v_ss + b.v_ss) / 2;
  const auto m = local_quadratic_at(Target::m, e, v, 0.0, 1.0);
  const auto s = local_quadratic_at(Target::s, e, v, 0.0, 1.0);
  CHECK(std::abs(s.hess_ee - m.hess_ee) > 1e-3 * std::abs(m.hess_ee));
}

TEST_CASE("Hessian geometry") {
  SUBCASE("axis aligned") {
    Eigen::Matrix2d h;
    h << 2, 0, 0, 8;
    const auto g = hessian_geometry(h);
    CHECK(g.lambda_min == doctest::Approx(2));
    CHECK(g.lambda_max == doctest::Approx(8));
    CHECK(g.eccentricity == doctest::Approx(std::sqrt(0.75)));
    CHECK(std::abs(g.orientation_rad) < 1e-14);
  }
  SUBCASE("rotated") {
    const double t = 0.3;
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    const Eigen::Matrix2d h = r * Eigen::Vector2d(1, 4).asDiagonal() * r.transpose();
    CHECK(hessian_geometry(h).orientation_rad == doctest::Approx(t).epsilon(1e-12));
  }
  SUBCASE("not positive definite") {
    Eigen::Matrix2d h;
    h << 1, 0, 0, -1;
    CHECK_THROWS_AS(hessian_geometry(h), ClassificationError);
  }
  SUBCASE("axis angles") {
    CHECK(wrap_axis_angle(std::numbers::pi) == doctest::Approx(0).epsilon(1e-15));
    CHECK(wrap_axis_angle(-std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 2));
    CHECK(axis_angle_difference(1.5, -1.5) == doctest::Approx(std::numbers::pi - 3.0));
  }
}

TEST_CASE("closed form report") {
  const auto ss = table_row(1);
  const auto report = closed_form_cross_check(ss);
  for (const char* name : {"d2Q1/dE2", "d2Q2/dE2", "d2Q3/dE2", "d2Q4/dE2", "d2M/dE2", "d2M/dV2",
                           "d2M/dEdV", "G1", "G2", "A' relation (numeric G)",
                           "B' relation (numeric G)", "H' relation (numeric G)",
                           "A' relation (closed-form G)", "B' relation (closed-form G)",
                           "H' relation (closed-form G)"}) {
    const auto* e = report.find(name);
    REQUIRE_MESSAGE(e != nullptr, name);
    CHECK(std::isfinite(e->numeric_value));
    CHECK(std::isfinite(e->closed_form_value));
    CHECK(std::isfinite(e->relative_discrepancy));
  }
  // With C -> 0 and P -> 1 the relation reduces to A' = A.
  const auto* a_rel = report.find("A' relation (numeric G)");
  CHECK(a_rel->relative_discrepancy < 1e-6);
  CHECK(rel(a_rel->closed_form_value, reference::kUnitWidth[0].a_scaled * 1e-5) < 1e-3);

  SpectralSingularity general = ss;
  general.v1_fixed = 1.0;
  CHECK_THROWS_AS(closed_form_cross_check(general), DomainError);
}

TEST_CASE("primed relation algebra") {
  const auto r = primed_from_relations(2, 3, 4, 0, 0, 5, 6, 1);
  CHECK(r.a_prime == 2);
  CHECK(r.b_prime == 3);
  CHECK(r.h_prime == 4);
  const auto q = primed_from_relations(2, 3, 4, 1, 2, 5, 6, 2);
  CHECK(q.a_prime == doctest::Approx(-1.0 * 5 / 4 + 1.0));
  CHECK(q.b_prime == doctest::Approx(-2.0 * 6 / 4 + 1.5));
  CHECK(q.h_prime == doctest::Approx(2.0 - (6.0 + 10.0) / 4));
}
