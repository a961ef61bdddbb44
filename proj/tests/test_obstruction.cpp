#include <doctest.h>

#include <cmath>
#include <numbers>

#include "semicov/annulus.hpp"
#include "semicov/error.hpp"
#include "semicov/obstruction.hpp"

using namespace semicov;

TEST_CASE("lift_loop_winding on the product model") {
  auto sq = product_model(2);
  const LoopSpec loop{0.5, 0.2};
  auto half = lift_loop_winding(sq, loop, 1, 1, {0.5, 0.1}, {0.1, 0.9});
  CHECK(half.y2 - half.y1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.winding == 0);
  auto full = lift_loop_winding(sq, loop, 1, 2, {0.5, 0.1}, {0.1, 0.9});
  CHECK(full.y2 - full.y1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.winding == 1);
  CHECK(full.push_error <= 1e-8);

  CHECK_THROWS_WITH_AS(lift_loop_winding(sq, loop, 1, 1, {0.95, 0.1}, {0.1, 0.9}),
                       doctest::Contains("EndpointOutsideK"), Error);
  CHECK_THROWS_AS(lift_loop_winding(sq, loop, 1, 1, {0.5, 0.3}, {0.1, 0.9}), Error);
}

TEST_CASE("lift correctness: F^n(beta) retraces j alpha") {
  auto map = pole_example(base_affine(0.45, 0.275));
  const LoopSpec loop{0.5, 0.3};
  const int n = 3;
  // x0 = 0.5 is fixed by the base, so the start sits over 0.5
  double y = loop.theta0 + 5.0;
  for (int k = 0; k < n; ++k) y = map.fiber_inverse(0.5, y);
  auto rec = lift_loop_winding(map, loop, n, 4, {0.5, y}, {0.1, 0.9});
  CHECK(rec.push_error <= 1e-8);
  CHECK(rec.y2 - rec.y1 == doctest::Approx(4.0 / 8.0).epsilon(1e-10));
  CHECK(std::abs(std::abs(rec.y2 - rec.y1) - rec.winding) <= 1.0);
}

TEST_CASE("star_condition_scan") {
  auto pole = pole_example(base_affine(0.45, 0.275));
  auto report = star_condition_scan(pole, {0.1, 0.9}, LoopSpec{0.5, 0.0}, 6);
  REQUIRE(report.max_winding.size() == 6);
  CHECK(report.m > 1.0);
  CHECK(report.bound == doctest::Approx(2 * report.m + 1));
  CHECK(report.within_bound);
  for (const auto& r : report.records) {
    CHECK(r.winding >= 0);
    CHECK(static_cast<double>(r.winding) <= report.bound);
    CHECK(std::abs(std::abs(r.y2 - r.y1) - static_cast<double>(r.winding)) <= 1.0);
  }
  // 2^n starts times the distinct j per n
  CHECK(report.records.size() == 2 * 1 + 4 * 2 + 8 * 3 + 16 * 3 + 32 * 3 + 64 * 3);

  auto product = star_condition_scan(product_model(2), {0.1, 0.9}, LoopSpec{0.5, 0.0}, 5);
  CHECK(product.m < 1e-6);
  for (long w : product.max_winding) CHECK(w <= 1);
}

TEST_CASE("star scan respects 2M+1 for a solved skew map") {
  auto map = make_skew_product(base_identity(), fiber_linear(3, [](double x) {
                                 return 0.8 * std::sin(2 * std::numbers::pi * x);
                               }));
  auto report = star_condition_scan(map, {0.2, 0.8}, LoopSpec{0.4, 0.1}, 4);
  CHECK(report.within_bound);
  CHECK(report.m == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("star scan surfaces branch ambiguity") {
  auto folded = AnnulusMapLift::unchecked(
      base_identity(), [](double, double y) { return 2 * y + 0.3 * std::sin(4 * std::numbers::pi * y); }, 2);
  CHECK_THROWS_WITH_AS(star_condition_scan(folded, {0.1, 0.9}, LoopSpec{0.5, 0.0}, 2, 0.0),
                       doctest::Contains("BranchAmbiguity"), Error);
}

TEST_CASE("counterexample growth table") {
  auto rows = counterexample_growth_table(8);
  REQUIRE(rows.size() == 7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == static_cast<int>(i) + 2);
    CHECK(rows[i].lower_bound == rows[i].n - 1);
    CHECK(rows[i].verified);
    if (i > 0) CHECK(rows[i].lower_bound > rows[i - 1].lower_bound);
  }
  CHECK(build_band_model(5).lower_bound == 4);
  for (int n = 1; n <= 12; ++n) {
    auto b = build_band_model(n);
    CHECK(b.failed.empty());
    CHECK(b.alpha_end.second == n);
    CHECK(b.y_height > n);
    CHECK(b.x_height < 0.5);
    CHECK(b.y_height - b.x_height > n - 1);
  }
  CHECK_THROWS_AS(counterexample_growth_table(1), Error);
}
