// Copyright 2026 The inhomog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "inhomog/metrical.hpp"
#include "inhomog/rng.hpp"

using namespace inhomog;

namespace {

PsiSpec quarter_over_q() {
  PsiSpec psi;
  psi.c = mpq_class(1, 4);
  psi.alpha = 1;
  psi.beta = 0;
  return psi;
}

}  // namespace

TEST_CASE("psi family basics") {
  PsiSpec psi = PsiSpec::parse("1,1,0");
  REQUIRE(psi.series_diverges());
  REQUIRE(PsiSpec::parse("1,1.5,0").series_diverges() == false);
  REQUIRE(PsiSpec::parse("1,1,1").series_diverges());
  REQUIRE(PsiSpec::parse("1,1,2").series_diverges() == false);
  REQUIRE(PsiSpec::parse("0.5,0,0").series_diverges());
  REQUIRE(psi.eval_exact(4).value() == mpq_class(1, 4));
  REQUIRE(psi.eval_exact(1).value() == mpq_class(1, 2));  // clamped from 1
  REQUIRE(psi.non_increasing_over(2000));
  REQUIRE_FALSE(PsiSpec::parse("1,0,-2").non_increasing_over(2000));

  auto [lo, hi] = quarter_over_q().scaling_ratio_bounds(2000);
  REQUIRE(lo > 0);
  REQUIRE(hi < 1.0);
  REQUIRE(std::abs(lo - 0.2) < 0.01);  // psi(5l)/psi(l) = 1/5 for the pure power

  // the ball evaluation brackets the exact value
  PsiSpec frac = PsiSpec::parse("1,1.5,0");
  for (std::uint64_t q : {2ull, 10ull, 1000ull}) {
    RealBall b = frac.eval_ball(q);
    const double ref = std::pow(static_cast<double>(q), -1.5);
    REQUIRE(std::abs(b.center_double() - ref) < 1e-12);
  }
}

TEST_CASE("strip family membership and measure") {
  StripFamily f{6, quarter_over_q()};
  REQUIRE(f.measure_exact() == mpq_class(1, 36));  // 2*phi(6)*(1/24)/6
  // witness p = -1: |6*(1/6) + (-1) - 0| = 0 and gcd(1,6) = 1
  REQUIRE(f.contains(1.0 / 6, 0.0));
  // the nearest integer shift of 6x - y lands on a residue sharing a factor
  REQUIRE_FALSE(f.contains(1.0 / 3, 0.0));  // p = -2, gcd(2,6) = 2
  REQUIRE_FALSE(f.contains(0.25, 0.4));     // distance 0.9 to the coprime shift
}

TEST_CASE("strip measure exact values") {
  REQUIRE(strip_measure_exact(1, mpq_class(1, 4)) == mpq_class(1, 2));
  REQUIRE(strip_measure_exact(6, mpq_class(1, 12)) == mpq_class(1, 18));
  REQUIRE(strip_measure_exact(6, mpq_class(0)) == 0);
  REQUIRE_THROWS_AS(strip_measure_exact(5, mpq_class(3, 4)), std::invalid_argument);
}

TEST_CASE("strip measure Monte Carlo agrees with the exact formula") {
  PsiSpec psi = quarter_over_q();
  for (std::uint64_t q : {1ull, 6ull, 17ull}) {
    const double exact = strip_measure_exact(q, psi).get_d();
    McEstimate mc = strip_measure_mc(q, psi, 200000, 91001, 2);
    CAPTURE(q, mc.estimate, exact);
    REQUIRE(std::abs(mc.estimate - exact) <= 4 * mc.std_error);
  }
  SECTION("psi = 0 gives exactly zero") {
    McEstimate mc = strip_measure_mc(5, PsiSpec::parse("0,1,0"), 20000, 3, 1);
    REQUIRE(mc.hits == 0);
  }
  SECTION("identical seeds reproduce identical counts across thread splits") {
    McEstimate a = strip_measure_mc(7, psi, 50000, 1234, 1);
    McEstimate b = strip_measure_mc(7, psi, 50000, 1234, 2);
    REQUIRE(a.hits == b.hits);
  }
}

TEST_CASE("membership counts at most one witness when psi <= 1/2 (disjoint strips)") {
  CounterRng rng(2024, 1);
  PsiSpec psi = quarter_over_q();
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = rng.next_unit();
    const double y = rng.next_unit();
    const std::uint64_t q = 1 + rng.next_below(25);
    const double pq = psi.eval_d(q);
    // exhaustive witness count over all relevant p
    int witnesses = 0;
    for (long p = -2 - static_cast<long>(q); p <= static_cast<long>(2 + q); ++p) {
      if (std::abs(q * x + p - y) <= pq &&
          std::gcd(static_cast<unsigned long long>(p < 0 ? -p : p), q) == 1)
        ++witnesses;
    }
    CAPTURE(x, y, q);
    REQUIRE(witnesses <= 1);
  }
}

TEST_CASE("pairwise intersection against the independence product") {
  PsiSpec psi = quarter_over_q();
  PairIntersection pi = pair_intersection_mc(3, 5, psi, 400000, 91002, 2);
  REQUIRE(pi.independence_value == Catch::Approx(4.0 / (12.0 * 20.0)));
  REQUIRE(std::abs(pi.unfiltered.estimate - pi.independence_value) <= 4 * pi.unfiltered.std_error);
  REQUIRE(pi.coprime.estimate <= pi.independence_value + 4 * pi.coprime.std_error);
  REQUIRE_THROWS_AS(pair_intersection_mc(3, 3, psi, 1000, 1, 1), std::invalid_argument);
}

TEST_CASE("partial sums and the totient sandwich") {
  SECTION("psi = 1/2 constant, Q = 4: sums are 2 and 4/3") {
    PsiSpec half = PsiSpec::parse("0.5,0,0");
    PartialSums ps = partial_sums(half, 4);
    REQUIRE(ps.sum_psi.contains_q(mpq_class(2)));
    REQUIRE(ps.sum_phi_psi_over_q.contains_q(mpq_class(4, 3)));
    REQUIRE(ps.left_inequality_holds);
    REQUIRE(ps.right_inequality_holds);
  }
  SECTION("Q = 1 has the right inequality exactly tight") {
    PsiSpec half = PsiSpec::parse("0.5,0,0");
    PartialSums ps = partial_sums(half, 1);
    REQUIRE(ps.right_inequality_holds);
    REQUIRE(ps.left_inequality_holds);
  }
  SECTION("psi = 1/q over a large range") {
    PsiSpec inv = PsiSpec::parse("1,1,0");
    PartialSums ps = partial_sums(inv, 20000);
    REQUIRE(ps.left_inequality_holds);
    REQUIRE(ps.right_inequality_holds);
    // sum phi(q) psi(q) / q approaches (6/pi^2) sum psi for the harmonic psi
    const double ratio = ps.sum_phi_psi_over_q.center_double() / ps.sum_psi.center_double();
    REQUIRE(ratio == Catch::Approx(0.6079).margin(0.02));
  }
}

TEST_CASE("second-moment ratio") {
  PsiSpec halfq = PsiSpec::parse("0.5,1,0");
  SecondMomentRatio r = borel_cantelli_lower_bound(halfq, 10000);
  REQUIRE(certified_ge_q(r.ratio, mpq_class(1, 5)));
  REQUIRE_FALSE(r.small_Q);
  SecondMomentRatio tiny = borel_cantelli_lower_bound(halfq, 1);
  REQUIRE(tiny.small_Q);
  REQUIRE_THROWS_AS(borel_cantelli_lower_bound(PsiSpec::parse("1,1.5,0"), 100),
                    std::invalid_argument);
}

TEST_CASE("dichotomy experiment basics") {
  SECTION("divergent psi keeps windows populated") {
    auto rows = dichotomy_experiment(PsiSpec::parse("1,1,0"), 800, 4, 7, 555, 2);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
      REQUIRE(r.points == 800);
      REQUIRE(r.fraction > 0.2);
    }
  }
  SECTION("psi = 0 never hits") {
    auto rows = dichotomy_experiment(PsiSpec::parse("0,1,0"), 500, 4, 6, 555, 1);
    for (const auto& r : rows) REQUIRE(r.hits == 0);
  }
  SECTION("same seed, same counts, any thread split") {
    auto a = dichotomy_experiment(PsiSpec::parse("1,1,0"), 600, 4, 6, 999, 1);
    auto b = dichotomy_experiment(PsiSpec::parse("1,1,0"), 600, 4, 6, 999, 2);
    for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].hits == b[i].hits);
  }
}
