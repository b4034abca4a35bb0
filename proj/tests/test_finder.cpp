#include <doctest.h>

#include <cmath>

#include "nhscatter/finder.hpp"
#include "nhscatter/reference_values.hpp"

using namespace nhs;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("grid scan") {
  SUBCASE("one candidate near each tabulated singularity") {
    const auto seeds = scan_candidates(SearchConfig{}, ScanTarget{});
    CHECK(seeds.size() >= 10);
    for (const auto& row : reference::kUnitWidth) {
      bool found = false;
      for (const auto& s : seeds) {
        found = found || (std::abs(s.e - row.e_ss) < 3.0 && std::abs(s.v - row.v_ss) < 1.0);
      }
      CHECK_MESSAGE(found, "SS", row.index);
    }
  }
  SUBCASE("nothing below the first singularity") {
    SearchConfig low;
    low.e_range = {1, 10};
    low.v_range = {0.1, 5};
    CHECK(scan_candidates(low, ScanTarget{}).empty());
    CHECK(find_in_window(low, ScanTarget{}).empty());
  }
  SUBCASE("real barriers have none") {
    SearchConfig sc;
    sc.e_range = {1, 200};
    sc.v_range = {-50, 50};
    sc.grid_e = 200;
    sc.grid_v = 100;
    CHECK(scan_candidates(sc, ScanTarget{BarrierMode::real, 1.0, 0.0}).empty());
    CHECK(find_in_window(sc, ScanTarget{BarrierMode::real, 1.0, 0.0}).empty());
  }
  SUBCASE("invalid windows") {
    SearchConfig bad;
    bad.e_range = {10, 1};
    CHECK_THROWS_AS(scan_candidates(bad, ScanTarget{}), DomainError);
    SearchConfig coarse;
    coarse.grid_e = 4;
    CHECK_THROWS_AS(scan_candidates(coarse, ScanTarget{}), DomainError);
  }
}

TEST_CASE("Newton refinement") {
  SUBCASE("first and last tabulated rows") {
    const auto ss1 = refine_root({16.0, 14.1, 0}, 1.0, 0.0);
    CHECK(ss1.converged);
    CHECK(rel(ss1.e_ss, 16.052461577163) < 1e-9);
    CHECK(rel(ss1.v_ss, 14.1104958749715) < 1e-9);
    const auto ss10 = refine_root({1072, 201, 0}, 1.0, 0.0);
    CHECK(rel(ss10.e_ss, 1072.5869864069) < 1e-9);
    CHECK(rel(ss10.v_ss, 201.5968028915) < 1e-9);
  }
  SUBCASE("complex barrier") {
    const auto& ref = reference::kComplexBarrier;
    const auto ss = refine_root({1256, 35, 0}, ref.width_b, ref.v1);
    CHECK(rel(ss.e_ss, ref.e_ss) < 1e-6);
    CHECK(rel(ss.v_ss, ref.v2_ss) < 1e-6);
    CHECK(ss.residual < residual_tolerance(ss.e_ss, ss.v_ss, ref.width_b, ref.v1));
  }
  SUBCASE("idempotent") {
    const auto once = refine_root({53, 30, 0}, 1.0, 0.0);
    const auto twice = refine_root({once.e_ss, once.v_ss, 0}, 1.0, 0.0);
    CHECK(rel(twice.e_ss, once.e_ss) < 1e-13);
    CHECK(rel(twice.v_ss, once.v_ss) < 1e-13);
    CHECK(twice.iterations <= 2);
  }
  SUBCASE("failure carries the best iterate") {
    SearchConfig tight;
    tight.max_iter = 1;
    try {
      refine_root({30, 20, 0}, 1.0, 0.0, tight);
      FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
      CHECK(e.best_e() > 0);
      CHECK(e.best_v() > 0);
      CHECK(e.best_residual() > 0);
    }
  }
  SUBCASE("extended polish keeps the root") {
    const auto ss = refine_root({16.0, 14.1, 0}, 1.0, 0.0);
    const auto x = refine_root_extended(ss);
    CHECK(x.residual < Extended(1e-40));
    CHECK(std::abs(static_cast<double>(x.e) - ss.e_ss) < 1e-13 * ss.e_ss);
    CHECK(std::abs(static_cast<double>(x.v) - ss.v_ss) < 1e-13 * ss.v_ss);
  }
}

TEST_CASE("table enumeration") {
  SUBCASE("unit width reproduces the table") {
    const auto en = enumerate_table(1.0, 10);
    REQUIRE(en.singularities.size() == 10);
    CHECK_FALSE(en.warning.has_value());
    for (std::size_t i = 0; i < 10; ++i) {
      const auto& ss = en.singularities[i];
      const auto& row = reference::kUnitWidth[i];
      CHECK(ss.index == row.index);
      CHECK(rel(ss.e_ss, row.e_ss) < 1e-9);
      CHECK(rel(ss.v_ss, row.v_ss) < 1e-9);
    }
  }
  SUBCASE("count one") {
    const auto en = enumerate_table(1.0, 1);
    REQUIRE(en.singularities.size() == 1);
    CHECK(rel(en.singularities[0].e_ss, 16.052461577163) < 1e-9);
  }
  SUBCASE("width two is stable under reseeding") {
    const auto en = enumerate_table(2.0, 3);
    REQUIRE(en.singularities.size() == 3);
    for (const auto& ss : en.singularities) {
      CHECK(ss.residual < 1e-12);
      for (double de : {-1e-3, 1e-3}) {
        for (double dv : {-1e-3, 1e-3}) {
          const auto again = refine_root({ss.e_ss * (1 + de), ss.v_ss * (1 + dv), 0}, 2.0, 0.0);
          CHECK(same_root(again, ss));
          CHECK(rel(again.e_ss, ss.e_ss) < 1e-12);
          CHECK(rel(again.v_ss, ss.v_ss) < 1e-12);
        }
      }
    }
    CHECK(rel(en.singularities[0].e_ss, 4.013115394) < 1e-9);
    CHECK(rel(en.singularities[0].v_ss, 3.527623969) < 1e-9);
  }
  SUBCASE("more roots than the default window holds") {
    const auto en = enumerate_table(1.0, 12);
    CHECK(en.singularities.size() == 12);
    for (std::size_t i = 1; i < en.singularities.size(); ++i) {
      CHECK(en.singularities[i].e_ss > en.singularities[i - 1].e_ss);
    }
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(enumerate_table(0.0, 3), DomainError);
    CHECK_THROWS_AS(enumerate_table(1.0, 0), DomainError);
  }
}

TEST_CASE("complex barrier window") {
  const auto& ref = reference::kComplexBarrier;
  SearchConfig sc;
  sc.e_range = {1200, 1300};
  const auto roots = find_in_window(sc, ScanTarget{BarrierMode::general, ref.width_b, ref.v1});
  REQUIRE_FALSE(roots.empty());
  int near = 0;
  for (const auto& r : roots) {
    CHECK(r.e_ss > 1200);
    CHECK(r.e_ss < 1300);
    if (rel(r.e_ss, ref.e_ss) < 1e-6 && rel(r.v_ss, ref.v2_ss) < 1e-6) {
      ++near;
    }
  }
  CHECK(near == 1);
}
