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

#include <set>

#include "inhomog/lattice_orbit.hpp"

using namespace inhomog;

namespace {

std::vector<UnimodMatrix> exhaustive(std::int64_t T) {
  std::vector<UnimodMatrix> out;
  for (std::int64_t a = -T; a <= T; ++a)
    for (std::int64_t b = -T; b <= T; ++b)
      for (std::int64_t c = -T; c <= T; ++c)
        for (std::int64_t d = -T; d <= T; ++d)
          if (a * d - b * c == 1) out.push_back({a, b, c, d});
  std::sort(out.begin(), out.end());
  return out;
}

Point sqrt2_point() {
  Point x;
  x.x1 = SymValue::parse("sqrt(2)");
  x.x2 = SymValue::integer(1);
  return x;
}

}  // namespace

TEST_CASE("both enumerations equal the exhaustive reference for T <= 6") {
  for (std::int64_t T = 1; T <= 6; ++T) {
    std::vector<UnimodMatrix> ref = exhaustive(T);

    std::vector<UnimodMatrix> fam;
    for_each_sl2(T, [&](const UnimodMatrix& m) {
      REQUIRE(m.det() == 1);
      fam.push_back(m);
    });
    std::sort(fam.begin(), fam.end());
    REQUIRE(std::adjacent_find(fam.begin(), fam.end()) == fam.end());  // no duplicates
    CAPTURE(T);
    REQUIRE(fam == ref);

    std::vector<UnimodMatrix> shell;
    enumerate_ball(T, [&](const UnimodMatrix& m) { shell.push_back(m); });
    // canonical order: norms nondecreasing, lex within a shell
    for (size_t i = 1; i < shell.size(); ++i) {
      REQUIRE(shell[i - 1].norm() <= shell[i].norm());
      if (shell[i - 1].norm() == shell[i].norm()) REQUIRE(shell[i - 1] < shell[i]);
    }
    std::sort(shell.begin(), shell.end());
    REQUIRE(shell == ref);
  }
}

TEST_CASE("count at T = 1 is 20 and the identity is always present") {
  long long count = 0;
  bool has_id = false;
  for_each_sl2(1, [&](const UnimodMatrix& m) {
    ++count;
    if (m == UnimodMatrix{}) has_id = true;
  });
  REQUIRE(count == 20);
  REQUIRE(has_id);
}

TEST_CASE("ball growth is quadratic-ish") {
  auto count_at = [](std::int64_t T) {
    long long n = 0;
    for_each_sl2(T, [&](const UnimodMatrix&) { ++n; });
    return n;
  };
  const double r50 = static_cast<double>(count_at(50)) / (50.0 * 50.0);
  const double r100 = static_cast<double>(count_at(100)) / (100.0 * 100.0);
  REQUIRE(std::abs(r50 - r100) / r100 < 0.1);
}

TEST_CASE("orbit hits") {
  SECTION("identity hit when y = x") {
    Point x = sqrt2_point();
    OrbitHits hits = orbit_hits(x, x, 2, mpq_class(5));  // huge exponent still hits at dist 0
    bool id_hit = false;
    for (const auto& h : hits.hits)
      if (h.gamma == UnimodMatrix{}) id_hit = true;
    REQUIRE(id_hit);
  }
  SECTION("far target with tiny T gives nothing") {
    Point y;
    y.x1 = SymValue::integer(100);
    y.x2 = SymValue::integer(100);
    OrbitHits hits = orbit_hits(sqrt2_point(), y, 2, mpq_class(1, 2));
    REQUIRE(hits.hits.empty());
  }
  SECTION("diagonal target at mu = 1/2 is reached") {
    Point y;
    y.x1 = SymValue::parse("7/10");
    y.x2 = SymValue::parse("7/10");
    OrbitHits hits = orbit_hits(sqrt2_point(), y, 500, mpq_class(1, 2));
    REQUIRE_FALSE(hits.hits.empty());
    for (const auto& h : hits.hits) {
      REQUIRE(h.gamma.det() == 1);
      REQUIRE(h.norm <= 500);
    }
    // hits arrive sorted by (norm, lex)
    for (size_t i = 1; i < hits.hits.size(); ++i)
      REQUIRE(hits.hits[i - 1].norm <= hits.hits[i].norm);
  }
  SECTION("x = 0 is rejected") {
    Point zero;
    zero.x1 = SymValue::integer(0);
    zero.x2 = SymValue::integer(0);
    REQUIRE_THROWS_AS(orbit_hits(zero, sqrt2_point(), 10, mpq_class(1, 2)),
                      std::invalid_argument);
  }
}

TEST_CASE("coprime pair extraction through the orbit") {
  TargetProblem prob = TargetProblem::from_strings("sqrt(2)", "7/10");
  OrbitPairsResult res = orbit_coprime_pairs(prob, 800);
  REQUIRE_FALSE(res.pairs.empty());
  const mpfr_prec_t prec = 256;
  for (const auto& pr : res.pairs) {
    REQUIRE(pr.gamma.det() == 1);
    REQUIRE(pr.first.coprime);
    REQUIRE(pr.second.coprime);
    // two rows assemble to determinant one: q1 p2 - q2 p1 = 1
    REQUIRE(pr.first.q * pr.second.p - pr.second.q * pr.first.p == 1);
    // row bound: error <= c / sqrt(max |q_i|)
    mpz_class qmax = std::max(abs(pr.first.q), abs(pr.second.q));
    RealBall bound = res.coefficient / sqrt_ball(RealBall::from_z(qmax, prec));
    REQUIRE(compare_certified(pr.first.error, bound) != Cmp::Greater);
    REQUIRE(compare_certified(pr.second.error, bound) != Cmp::Greater);
  }
  REQUIRE_THROWS_AS(orbit_coprime_pairs(TargetProblem::from_strings("sqrt(2)", "0"), 100),
                    std::invalid_argument);
}

TEST_CASE("annulus counting") {
  Point x = sqrt2_point();
  Annulus omega(mpq_class(1), mpq_class(2));

  SECTION("M is nondecreasing in T and matches the shell route") {
    AnnulusCounts counts = count_in_annulus(x, omega, {50, 100, 200}, 2);
    REQUIRE(counts.counts[0] <= counts.counts[1]);
    REQUIRE(counts.counts[1] <= counts.counts[2]);
    REQUIRE(counts.counts[0] >= 1);

    // independent shell-order filter
    long long m200 = 0;
    RealBall x1 = x.x1.eval(160), x2 = x.x2.eval(160);
    enumerate_ball(200, [&](const UnimodMatrix& g) {
      ImagePoint img = apply_matrix(g, x1, x2);
      RealBall sup = max_ball(abs_ball(img.u), abs_ball(img.v));
      if (certified_ge_q(sup, omega.inner) && certified_le_q(sup, omega.outer)) ++m200;
    });
    REQUIRE(m200 == counts.counts[2]);
  }

  SECTION("widening the annulus scales the count roughly with the boundary integral") {
    // the weight integral over {1 <= |z| <= b} grows like 8(b-1)
    AnnulusCounts narrow = count_in_annulus(x, Annulus(mpq_class(1), mpq_class(2)), {600}, 2);
    AnnulusCounts wide = count_in_annulus(x, Annulus(mpq_class(1), mpq_class(3)), {600}, 2);
    const double ratio =
        static_cast<double>(wide.counts[0]) / static_cast<double>(narrow.counts[0]);
    REQUIRE(ratio > 1.5);
    REQUIRE(ratio < 2.6);
  }

  SECTION("rational slope is rejected") {
    Point bad;
    bad.x1 = SymValue::parse("1/2");
    bad.x2 = SymValue::integer(1);
    REQUIRE_THROWS_AS(count_in_annulus(bad, omega, {100}), std::invalid_argument);
  }

  SECTION("an annulus no small matrix can reach counts zero") {
    AnnulusCounts far = count_in_annulus(x, Annulus(mpq_class(1, 100), mpq_class(1, 50)), {5});
    REQUIRE(far.counts[0] == 0);
  }

  SECTION("exact-boundary images are decided exactly (the annulus is closed)") {
    // (1 -1; 0 1) maps (sqrt(2), 1) to (sqrt(2)-1, 1): the sup norm is
    // exactly the inner bound 1, the hull ball has zero radius there, and
    // the non-strict comparison against the rational bound certifies
    // membership; nothing is left undecided
    AnnulusCounts tiny = count_in_annulus(x, omega, {2});
    REQUIRE(tiny.boundary_undecided[0] == 0);
    REQUIRE(tiny.counts[0] >= 1);
  }
}

TEST_CASE("density exponent estimation") {
  Point x = sqrt2_point();
  SECTION("records shrink the distance and mu_hat falls in a sane range") {
    auto res = density_exponent_estimate(x, 0.7, 0.7, 2000, 2);
    REQUIRE_FALSE(res.records.empty());
    for (size_t i = 1; i < res.records.size(); ++i) {
      REQUIRE(res.records[i].dist < res.records[i - 1].dist);
      REQUIRE(res.records[i].norm >= res.records[i - 1].norm);
    }
    REQUIRE(res.mu_hat_defined);
    REQUIRE(res.mu_hat > 0.1);
    REQUIRE(res.mu_hat < 1.2);
  }
  SECTION("deterministic across thread counts") {
    auto r1 = density_exponent_estimate(x, 1.3, -1.1, 1500, 1);
    auto r2 = density_exponent_estimate(x, 1.3, -1.1, 1500, 2);
    REQUIRE(r1.records.size() == r2.records.size());
    for (size_t i = 0; i < r1.records.size(); ++i) {
      REQUIRE(r1.records[i].gamma == r2.records[i].gamma);
      REQUIRE(r1.records[i].exponent == r2.records[i].exponent);
    }
  }
  SECTION("rational slope is rejected") {
    Point bad;
    bad.x1 = SymValue::integer(3);
    bad.x2 = SymValue::integer(2);
    REQUIRE_THROWS_AS(density_exponent_estimate(bad, 0.5, 0.5, 100), std::invalid_argument);
  }
  SECTION("a target sitting exactly on an orbit image is flagged, not scored") {
    // build the target from the same double arithmetic the estimator uses:
    // (1 -1; 0 1) sends x to (sqrt2_d - 1, 1) exactly in doubles
    const double s2 = SymValue::parse("sqrt(2)").eval(128).center_double();
    auto res = density_exponent_estimate(x, s2 - 1.0, 1.0, 300, 1);
    REQUIRE(res.exact_hits >= 1);
  }
}
