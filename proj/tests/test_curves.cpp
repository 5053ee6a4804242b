#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "idt/curves.hpp"
#include "idt/family.hpp"
#include "idt/measures.hpp"
#include "idt/quantum.hpp"

using idt::CurvePair;
using idt::TradeoffPoint;

namespace {

// Discrete convexity on a uniform grid: all second differences of y stay
// above -tol.
bool convex_on_grid(const std::vector<double>& y, double tol) {
  for (size_t i = 2; i < y.size(); ++i)
    if (y[i] - 2.0 * y[i - 1] + y[i - 2] < -tol) return false;
  return true;
}

std::vector<double> sample(double (*f)(int, double), int param, double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(f(param, lo + (hi - lo) * i / (n - 1)));
  return out;
}

}  // namespace

TEST_CASE("diamond curve endpoints and midpoint") {
  for (int m = 2; m <= 6; ++m) {
    CHECK(idt::curve_tv_diamond(m, 0.0) == (m - 1.0) / m);
    CHECK(idt::curve_tv_diamond(m, 2.0 - 2.0 / m) == 0.0);
    CHECK(idt::curve_tv_diamond(m, 2.0) == 0.0);
  }
  CHECK(idt::curve_tv_diamond(2, 0.5) == doctest::Approx(0.0669872981077807).epsilon(1e-13));
  CHECK(std::abs(idt::curve_tv_diamond(10000, 1.0) - 0.5) <= 1e-2);
}

TEST_CASE("fidelity curve on hand-checked values") {
  for (int d : {2, 3, 5}) {
    CHECK(idt::curve_tv_fidelity(d, 1.0) ==
          doctest::Approx((d - 1.0) / d).epsilon(1e-15));
    CHECK(idt::curve_tv_fidelity(d, 1.0 / d) == 0.0);
    CHECK(idt::curve_tv_fidelity(d, 0.5 / d) == 0.0);
    CHECK(idt::curve_tv_fidelity(d, 0.0) == 0.0);
  }
  CHECK(idt::curve_tv_fidelity(2, (2.0 + std::sqrt(3.0)) / 4.0) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("average fidelity curve on hand-checked values") {
  for (int d : {2, 3, 5}) {
    CHECK(idt::curve_tv_avg_fidelity(d, 1.0) ==
          doctest::Approx((d - 1.0) / d).epsilon(1e-15));
    CHECK(idt::curve_tv_avg_fidelity(d, 2.0 / (d + 1)) == 0.0);
    CHECK(idt::curve_tv_avg_fidelity(d, 1.0 / (d + 1)) == 0.0);
  }
}

TEST_CASE("trace curve substitutes the fidelity curve") {
  for (int d : {2, 3, 5}) {
    CHECK(idt::curve_tv_trace(d, 0.0) == doctest::Approx((d - 1.0) / d).epsilon(1e-15));
    CHECK(std::abs(idt::curve_tv_trace(d, 1.0 - 1.0 / d)) <= 1e-15);
    CHECK(idt::curve_tv_trace(d, 1.0) == 0.0);
    for (int i = 0; i <= 20; ++i) {
      const double delta = i / 20.0;
      CHECK(idt::curve_tv_trace(d, delta) == idt::curve_tv_fidelity(d, 1.0 - delta));
      CHECK(std::abs(idt::curve_tv_diamond(d, 2.0 * delta) - idt::curve_tv_trace(d, delta)) <=
            1e-15);
    }
  }
}

TEST_CASE("diamond inversion pairs with the diamond curve") {
  for (int m : {2, 3, 5}) {
    CHECK(idt::min_diamond_for_tv(m, 0.0) == doctest::Approx(2.0 * (m - 1) / m).epsilon(1e-15));
    CHECK(idt::min_diamond_for_tv(m, 1.0 - 1.0 / m) == 0.0);
    CHECK(idt::min_diamond_for_tv(m, 1.0) == 0.0);

    const double hi = 1.0 - 1.0 / m;
    for (int i = 0; i <= 16; ++i) {
      const double lambda = 0.05 * hi + (0.9 * hi) * i / 16.0;
      CHECK(idt::curve_tv_diamond(m, idt::min_diamond_for_tv(m, lambda)) ==
            doctest::Approx(lambda).epsilon(1e-11));
    }
    for (int i = 0; i <= 16; ++i) {
      const double big = (2.0 - 2.0 / m) * (0.05 + 0.9 * i / 16.0);
      CHECK(idt::min_diamond_for_tv(m, idt::curve_tv_diamond(m, big)) ==
            doctest::Approx(big).epsilon(1e-10));
    }
  }
  CHECK(idt::min_diamond_for_tv(2, 0.25) ==
        doctest::Approx(1.0 - std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("curves are convex and suitably monotone") {
  for (int p : {2, 3, 5}) {
    const auto fid = sample(idt::curve_tv_fidelity, p, 0.0, 1.0, 200);
    const auto avg = sample(idt::curve_tv_avg_fidelity, p, 0.0, 1.0, 200);
    const auto tra = sample(idt::curve_tv_trace, p, 0.0, 1.0, 200);
    const auto dia = sample(idt::curve_tv_diamond, p, 0.0, 2.0, 200);
    const auto inv = sample(idt::min_diamond_for_tv, p, 0.0, 1.0, 200);
    for (const auto* y : {&fid, &avg, &tra, &dia, &inv}) CHECK(convex_on_grid(*y, 1e-9));

    for (size_t i = 1; i < fid.size(); ++i) {
      CHECK(fid[i] >= fid[i - 1] - 1e-15);
      CHECK(avg[i] >= avg[i - 1] - 1e-15);
      CHECK(tra[i] <= tra[i - 1] + 1e-15);
      CHECK(dia[i] <= dia[i - 1] + 1e-15);
      CHECK(inv[i] <= inv[i - 1] + 1e-15);
    }
  }
}

TEST_CASE("outcome count orders the diamond curves pointwise") {
  for (int i = 0; i < 50; ++i) {
    const double big = i / 50.0;
    const double m2 = idt::curve_tv_diamond(2, big);
    const double m3 = idt::curve_tv_diamond(3, big);
    const double m5 = idt::curve_tv_diamond(5, big);
    CHECK(m3 >= m2 - 1e-15);
    CHECK(m5 >= m3 - 1e-15);
  }
}

TEST_CASE("sweeps enumerate labeled grid points") {
  double start = 0.0, stop = 0.0;
  idt::default_grid(CurvePair::kTvDiamond, 2, start, stop);
  CHECK(start == 0.0);
  CHECK(stop == 1.0);

  const std::vector<TradeoffPoint> pts = idt::sweep_curve(CurvePair::kTvDiamond, 2, start, stop, 101);
  REQUIRE(pts.size() == 101);
  CHECK(pts.front().Delta == 0.0);
  CHECK(pts.front().delta == 0.5);
  CHECK(pts.back().Delta == 1.0);
  CHECK(pts.back().delta == 0.0);
  for (const TradeoffPoint& p : pts) {
    CHECK(p.m == 2);
    CHECK(p.measure_pair == "tv-diamond");
  }
  for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].delta <= pts[i - 1].delta + 1e-15);

  const auto single = idt::sweep_curve(CurvePair::kTvFidelity, 3, 0.7, 0.9, 1);
  REQUIRE(single.size() == 1);
  CHECK(single.front().Delta == 0.7);

  idt::default_grid(CurvePair::kTvFidelity, 4, start, stop);
  CHECK(start == 0.25);
  idt::default_grid(CurvePair::kTvAvgFidelity, 3, start, stop);
  CHECK(start == 0.5);
  idt::default_grid(CurvePair::kTvTrace, 2, start, stop);
  CHECK(stop == 0.5);

  CHECK_THROWS_AS(idt::sweep_curve(CurvePair::kTvDiamond, 2, 0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(idt::sweep_curve(CurvePair::kTvDiamond, 2, 1.0, 0.0, 5), std::invalid_argument);
}

TEST_CASE("curve names round-trip") {
  for (CurvePair pair : {CurvePair::kTvFidelity, CurvePair::kTvAvgFidelity, CurvePair::kTvTrace,
                         CurvePair::kTvDiamond}) {
    CurvePair parsed{};
    REQUIRE(idt::parse_curve_pair(idt::curve_pair_name(pair), parsed));
    CHECK(parsed == pair);
  }
  CHECK(idt::curve_value(CurvePair::kTvFidelity, 3, 0.9) == idt::curve_tv_fidelity(3, 0.9));
  CHECK(idt::curve_value(CurvePair::kTvAvgFidelity, 3, 0.9) == idt::curve_tv_avg_fidelity(3, 0.9));
  CHECK(idt::curve_value(CurvePair::kTvTrace, 3, 0.4) == idt::curve_tv_trace(3, 0.4));
  CHECK(idt::curve_value(CurvePair::kTvDiamond, 3, 0.4) == idt::curve_tv_diamond(3, 0.4));
  CurvePair parsed{};
  CHECK_FALSE(idt::parse_curve_pair("tv-entropy", parsed));
}

TEST_CASE("domain errors are rejected") {
  CHECK_THROWS_AS(idt::curve_tv_fidelity(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(idt::curve_tv_fidelity(2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(idt::curve_tv_fidelity(2, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(idt::curve_tv_avg_fidelity(2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(idt::curve_tv_trace(2, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(idt::curve_tv_diamond(2, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(idt::curve_tv_diamond(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(idt::min_diamond_for_tv(2, -0.5), std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(idt::curve_tv_diamond(2, nan), std::invalid_argument);
}

TEST_CASE("family achievers land on every curve") {
  const idt::Povm basis = [] {
    idt::Povm p;
    p.dim = 2;
    for (int i = 0; i < 2; ++i) {
      idt::ComplexMatrix e(2, 2);
      e(i, i) = 1.0;
      p.effects.push_back(e);
    }
    return p;
  }();

  for (double delta : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const idt::Instrument inst = idt::family_instrument(idt::achiever_from_delta(2, delta));
    const idt::Channel marginal = idt::instrument_channel(inst);
    CHECK(idt::delta_tv(idt::instrument_povm(inst), basis).value ==
          doctest::Approx(delta).epsilon(1e-10));

    const double f = idt::worst_fidelity(marginal, 60).value;
    CHECK(idt::curve_tv_fidelity(2, f) == doctest::Approx(delta).epsilon(2e-4));

    const double fbar = idt::avg_fidelity(marginal).value;
    CHECK(idt::curve_tv_avg_fidelity(2, fbar) == doctest::Approx(delta).epsilon(1e-6));

    const double dtr = idt::trace_norm_disturbance(marginal, 60).value;
    CHECK(idt::curve_tv_trace(2, dtr) == doctest::Approx(delta).epsilon(2e-4));

    const double dia = idt::diamond_distance(marginal).value;
    CHECK(idt::curve_tv_diamond(2, dia) == doctest::Approx(delta).epsilon(1e-6));
  }
}
