#include <cmath>
#include <numeric>
#include <random>

#include "bd_oracle.h"
#include "doctest.h"
#include "ogop/quality_metrics.h"

using namespace ogop;
using ogop::testing::bd_rate_trapezoid;

namespace {

RdCurve curve_from(std::initializer_list<RdPoint> points) {
  RdCurve c;
  c.points = points;
  return c;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

TEST_CASE("yuv_psnr applies the 6/1/1 weights") {
  CHECK(yuv_psnr(40.0, 40.0, 40.0) == doctest::Approx(40.0));
  CHECK(yuv_psnr(48.0, 40.0, 40.0) == doctest::Approx(46.0));
  CHECK(yuv_psnr(37.0, 41.0, 43.0) == doctest::Approx(38.25));

  // linear, and permutation-sensitive only through the luma weight
  CHECK(yuv_psnr(36.0, 40.0, 44.0) == doctest::Approx(yuv_psnr(36.0, 44.0, 40.0)));
  CHECK(yuv_psnr(40.0, 36.0, 44.0) != doctest::Approx(yuv_psnr(36.0, 40.0, 44.0)));
  CHECK(yuv_psnr(2 * 36.0, 2 * 40.0, 2 * 44.0) ==
        doctest::Approx(2 * yuv_psnr(36.0, 40.0, 44.0)));
}

TEST_CASE("RD curve validation") {
  RdCurve good = curve_from({{1000, 33, 36, 35},
                             {2000, 35, 38, 37},
                             {4000, 37, 40, 39},
                             {8000, 39, 42, 41}});
  CHECK_NOTHROW(good.validate());

  RdCurve short_curve = good;
  short_curve.points.pop_back();
  CHECK_THROWS_AS(short_curve.validate(), std::invalid_argument);

  RdCurve unsorted = good;
  std::swap(unsorted.points[0], unsorted.points[1]);
  CHECK_THROWS_AS(unsorted.validate(), std::invalid_argument);

  RdCurve non_monotone = good;
  non_monotone.points[3].psnr_y = 20.0;
  CHECK_THROWS_AS(non_monotone.validate(), std::invalid_argument);
}

TEST_CASE("bd_rate identity and constant rate shift") {
  const RdCurve anchor = curve_from({{1000, 33, 36, 35},
                                     {2000, 35, 38, 37},
                                     {4000, 37, 40, 39},
                                     {8000, 39, 42, 41}});
  CHECK(bd_rate(anchor, anchor) == 0.0);

  RdCurve shifted = anchor;
  for (RdPoint& p : shifted.points) p.rate_kbps *= 1.10;
  CHECK(bd_rate(anchor, shifted) == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(std::abs(bd_rate(anchor, shifted) - 10.0) < 1e-6);
  CHECK(bd_rate(shifted, anchor) ==
        doctest::Approx(100.0 * (1.0 / 1.10 - 1.0)).epsilon(1e-8));
}

TEST_CASE("bd_rate antisymmetry in the log domain") {
  const RdCurve a = curve_from({{900, 32.5, 36.1, 35.4},
                                {1800, 34.8, 38.0, 37.2},
                                {3600, 36.9, 39.8, 39.1},
                                {7200, 38.8, 41.5, 40.9}});
  const RdCurve b = curve_from({{800, 32.9, 36.4, 35.2},
                                {1700, 35.0, 38.3, 37.0},
                                {3400, 37.3, 40.0, 38.8},
                                {6800, 39.2, 41.9, 40.6}});
  const double ab = bd_rate(a, b);
  const double ba = bd_rate(b, a);
  CHECK(std::abs((1.0 + ab / 100.0) * (1.0 + ba / 100.0) - 1.0) < 1e-9);
}

TEST_CASE("bd_rate errors") {
  const RdCurve low = curve_from({{1000, 20, 24, 23},
                                  {2000, 22, 26, 25},
                                  {4000, 24, 28, 27},
                                  {8000, 26, 30, 29}});
  const RdCurve high = curve_from({{1000, 40, 44, 43},
                                   {2000, 42, 46, 45},
                                   {4000, 44, 48, 47},
                                   {8000, 46, 50, 49}});
  CHECK_THROWS_AS(bd_rate(low, high), NoOverlapError);

  RdCurve degenerate = low;
  degenerate.points[1].psnr_y = degenerate.points[0].psnr_y;
  degenerate.points[1].psnr_u = degenerate.points[0].psnr_u + 8.0;
  degenerate.points[1].psnr_v = degenerate.points[0].psnr_v;
  CHECK_THROWS_AS(bd_rate(degenerate, degenerate, RdComponent::Y),
                  std::invalid_argument);
}

TEST_CASE("bd_rate agrees with the dense trapezoid oracle") {
  std::mt19937 rng(20260809);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [anchor, test] = ogop::testing::random_curve_pair(rng);
    CAPTURE(trial);
    const double implementation = bd_rate(anchor, test);
    const double oracle = bd_rate_trapezoid(anchor, test);
    CHECK(std::abs(implementation - oracle) < 0.5);
  }
}

TEST_CASE("transition profile: up switch") {
  const TransitionProfile p =
      transition_profile(SwitchDirection::Up, 40.0, 35.0, 31);
  REQUIRE(p.values_db.size() == 31);
  CHECK_FALSE(p.clamped);
  CHECK(mean_of(p.values_db) == doctest::Approx(38.23).epsilon(1e-12));
  CHECK(std::abs(mean_of(p.values_db) - (40.0 - 1.77)) < 1e-9);
  for (size_t i = 1; i < p.values_db.size(); ++i) {
    CHECK(p.values_db[i] >= p.values_db[i - 1]);  // non-decreasing
  }
  for (double v : p.values_db) {
    CHECK(v >= 35.0);
    CHECK(v <= 40.0);
  }
}

TEST_CASE("transition profile: down switch") {
  const TransitionProfile p =
      transition_profile(SwitchDirection::Down, 40.0, 35.0, 31);
  REQUIRE(p.values_db.size() == 31);
  CHECK_FALSE(p.clamped);
  CHECK(p.values_db[0] == doctest::Approx(40.0 - 2.92).epsilon(1e-12));
  CHECK(std::abs(mean_of(p.values_db) - (40.0 - 3.72)) < 1e-9);
  for (double v : p.values_db) {
    CHECK(v >= 35.0);
    CHECK(v <= 40.0);
  }
}

TEST_CASE("transition profile: edges") {
  CHECK(transition_profile(SwitchDirection::Up, 40, 35, 0).values_db.empty());
  CHECK(transition_profile(SwitchDirection::Down, 40, 35, 0).values_db.empty());
  CHECK_THROWS_AS(transition_profile(SwitchDirection::Up, 30, 35, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(transition_profile(SwitchDirection::Up, 40, 35, -1),
                  std::invalid_argument);

  // Offsets infeasible for the gap: clamping activates and is reported.
  const TransitionProfile clamped =
      transition_profile(SwitchDirection::Up, 40.0, 39.0, 8);
  CHECK(clamped.clamped);
  for (double v : clamped.values_db) {
    CHECK(v >= 39.0);
    CHECK(v <= 40.0);
  }

  const TransitionProfile down_clamped =
      transition_profile(SwitchDirection::Down, 40.0, 38.0, 8);
  CHECK(down_clamped.clamped);
  CHECK(down_clamped.values_db[0] == doctest::Approx(38.0));
}

TEST_CASE("transition profile respects custom parameters") {
  TransitionParams params;
  params.up_mean_below_high_db = 1.0;
  params.down_first_rasl_drop_db = 2.0;
  params.down_mean_below_high_db = 2.5;
  const TransitionProfile up =
      transition_profile(SwitchDirection::Up, 42.0, 36.0, 15, params);
  CHECK(std::abs(mean_of(up.values_db) - 41.0) < 1e-9);
  const TransitionProfile down =
      transition_profile(SwitchDirection::Down, 42.0, 36.0, 15, params);
  CHECK(down.values_db[0] == doctest::Approx(40.0));
  CHECK(std::abs(mean_of(down.values_db) - 39.5) < 1e-9);

  TransitionParams bad;
  bad.up_mean_below_high_db = -1.0;
  CHECK_THROWS_AS(
      transition_profile(SwitchDirection::Up, 42.0, 36.0, 15, bad),
      std::invalid_argument);
}

TEST_CASE("session_quality statistics") {
  CHECK_THROWS_AS(session_quality({}), std::invalid_argument);

  const SessionQuality constant = session_quality(std::vector<double>(10, 40.0));
  CHECK(constant.mean_db == doctest::Approx(40.0));
  CHECK(constant.min_db == doctest::Approx(40.0));

  std::vector<double> two_level(6, 40.0);
  two_level.insert(two_level.end(), 3, 34.0);
  const SessionQuality mixed = session_quality(two_level);
  CHECK(mixed.mean_db == doctest::Approx((6 * 40.0 + 3 * 34.0) / 9.0));
  CHECK(mixed.min_db == doctest::Approx(34.0));

  // A switch window delimited inside the series reports its own mean.
  const TransitionProfile up =
      transition_profile(SwitchDirection::Up, 40.0, 35.0, 31);
  std::vector<double> timeline(10, 35.0);
  std::vector<int> window;
  for (double v : up.values_db) {
    window.push_back(static_cast<int>(timeline.size()));
    timeline.push_back(v);
  }
  timeline.insert(timeline.end(), 10, 40.0);
  const SessionQuality q = session_quality(timeline, {window});
  REQUIRE(q.transition_means_db.size() == 1);
  CHECK(q.transition_means_db[0] == doctest::Approx(38.23).epsilon(1e-12));
}
