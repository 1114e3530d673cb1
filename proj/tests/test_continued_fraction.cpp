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

#include "inhomog/continued_fraction.hpp"

using namespace inhomog;

namespace {

std::vector<long> a_of(const CFExpansion& cf) {
  std::vector<long> out;
  for (const auto& a : cf.a) out.push_back(a.get_si());
  return out;
}

}  // namespace

TEST_CASE("golden ratio expands to all ones with Fibonacci convergents") {
  CFExpansion cf = expand(SymValue::parse("golden"), 6);
  REQUIRE(a_of(cf) == std::vector<long>{1, 1, 1, 1, 1, 1, 1});
  std::vector<std::pair<long, long>> want = {{1, 1}, {2, 1}, {3, 2}, {5, 3},
                                             {8, 5}, {13, 8}, {21, 13}};
  for (size_t k = 0; k < want.size(); ++k) {
    REQUIRE(cf.p[k] == want[k].first);
    REQUIRE(cf.q[k] == want[k].second);
  }
  REQUIRE_FALSE(cf.terminated);
  REQUIRE_FALSE(cf.truncated);
}

TEST_CASE("sqrt(2) has period [2] after 1") {
  CFExpansion cf = expand(SymValue::parse("sqrt(2)"), 4);
  REQUIRE(a_of(cf) == std::vector<long>{1, 2, 2, 2, 2});
  std::vector<std::pair<long, long>> want = {{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}};
  for (size_t k = 0; k < want.size(); ++k) {
    REQUIRE(cf.p[k] == want[k].first);
    REQUIRE(cf.q[k] == want[k].second);
  }
}

TEST_CASE("rational input terminates exactly") {
  CFExpansion cf = expand(SymValue::parse("7/5"), 30);
  REQUIRE(a_of(cf) == std::vector<long>{1, 2, 2});
  REQUIRE(cf.terminated);
  REQUIRE_FALSE(cf.truncated);
}

TEST_CASE("decimal literal stops at its trust horizon") {
  // "0.5" certifies a_0 = 0 only: the interval [0.45, 0.55] cannot settle
  // the next quotient
  CFExpansion cf = expand(SymValue::parse("0.5"), 10);
  REQUIRE(cf.truncated);
  REQUIRE(cf.trust_horizon == 0);
  REQUIRE(a_of(cf) == std::vector<long>{0});
  REQUIRE_FALSE(cf.terminated);  // literals never report exact termination

  // a long literal certifies a usable stretch
  CFExpansion deep = expand(SymValue::parse("0.414213562373095048801688724209698078569671875376948"), 20);
  REQUIRE(deep.depth() == 20);
  // the digits above are sqrt(2) - 1, so quotients must be 0,2,2,2,...
  REQUIRE(deep.a[0] == 0);
  for (long k = 1; k <= 20; ++k) REQUIRE(deep.a[k] == 2);
}

TEST_CASE("the continued fraction of e follows the 1,1,2m pattern") {
  CFExpansion cf = expand(SymValue::parse("e"), 12);
  REQUIRE(a_of(cf) == std::vector<long>{2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1});
}

TEST_CASE("identity report validates the index origin on sqrt(2) and golden") {
  for (const char* expr : {"sqrt(2)", "golden"}) {
    CFExpansion cf = expand(SymValue::parse(expr), 40);
    IdentityReport rep = verify_identities(cf);
    CAPTURE(expr);
    REQUIRE(rep.all_ok());
    // explicit determinant spot checks fixing the convention
    // p_0 q_1 - p_1 q_0 = -1
    REQUIRE(cf.p[0] * cf.q[1] - cf.p[1] * cf.q[0] == -1);
    // p_3 q_4 - p_4 q_3 = +1
    REQUIRE(cf.p[3] * cf.q[4] - cf.p[4] * cf.q[3] == 1);
  }
  // sqrt(2): 1*2 - 3*1 = -1
  CFExpansion cf = expand(SymValue::parse("sqrt(2)"), 1);
  REQUIRE(cf.p[0] * cf.q[1] - cf.p[1] * cf.q[0] == -1);
}

TEST_CASE("prefix consistency of expansions") {
  for (const char* expr : {"sqrt(7)", "e", "golden", "0.73205080756887729352744634150587"}) {
    CFExpansion shallow = expand(SymValue::parse(expr), 8);
    CFExpansion deep = expand(SymValue::parse(expr), 16);
    CAPTURE(expr);
    REQUIRE(shallow.depth() <= deep.depth());
    for (long k = 0; k <= shallow.depth(); ++k) {
      REQUIRE(shallow.a[k] == deep.a[k]);
      REQUIRE(shallow.p[k] == deep.p[k]);
      REQUIRE(shallow.q[k] == deep.q[k]);
    }
  }
}

TEST_CASE("residuals alternate in sign") {
  for (const char* expr : {"sqrt(2)", "golden", "e", "7/5"}) {
    CFExpansion cf = expand(SymValue::parse(expr), 12);
    long undecided = 0;
    long failures = residual_sign_alternation_failures(cf, undecided);
    CAPTURE(expr);
    REQUIRE(failures == 0);
    REQUIRE(undecided == 0);
  }
}

TEST_CASE("reciprocal-log partial sums against a direct-summation reference") {
  SECTION("K = 0 clamps to 1") {
    CFExpansion cf = expand(SymValue::parse("golden"), 2);
    RealBall s = inverse_log_q_sum(cf, 0);
    REQUIRE(s.contains_q(mpq_class(1)));  // q_0 = 1, max(1, log 1) = 1
  }
  SECTION("sqrt(2), K = 10") {
    CFExpansion cf = expand(SymValue::parse("sqrt(2)"), 10);
    RealBall s = inverse_log_q_sum(cf, 10);
    // independent reference: plain mpfr summation over the exact q_k
    mpfr_t acc, t;
    mpfr_init2(acc, 256);
    mpfr_init2(t, 256);
    mpfr_set_zero(acc, 1);
    for (long k = 0; k <= 10; ++k) {
      mpfr_set_z(t, cf.q[k].get_mpz_t(), MPFR_RNDN);
      mpfr_log(t, t, MPFR_RNDN);
      if (mpfr_cmp_ui(t, 1) < 0) mpfr_set_ui(t, 1, MPFR_RNDN);
      mpfr_ui_div(t, 1, t, MPFR_RNDN);
      mpfr_add(acc, acc, t, MPFR_RNDN);
    }
    const double ref = mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clear(acc);
    mpfr_clear(t);
    REQUIRE(std::abs(s.center_double() - ref) < 1e-12);
  }
  SECTION("golden, K = 30 grows like log K / log phi") {
    CFExpansion cf = expand(SymValue::parse("golden"), 30);
    RealBall s = inverse_log_q_sum(cf, 30);
    // independent reference: q_0 = q_1 = 1, q_k = q_{k-1} + q_{k-2}
    double ref = 0;
    double q_prev = 1, q_cur = 1;
    for (long k = 0; k <= 30; ++k) {
      const double q = (k == 0) ? q_prev : q_cur;
      ref += 1.0 / std::max(1.0, std::log(q));
      if (k >= 1) {
        const double next = q_cur + q_prev;
        q_prev = q_cur;
        q_cur = next;
      }
    }
    REQUIRE(std::abs(s.center_double() - ref) < 1e-9);
  }
}

TEST_CASE("growth statistic log(q_k)/k approaches the classical limits") {
  SECTION("golden ratio floors the statistic at log phi") {
    CFExpansion cf = expand(SymValue::parse("golden"), 40);
    const double log_phi = 0.48121182505960345;
    double v = khinchin_levy_stat(cf, 40).center_double();
    REQUIRE(v == Catch::Approx(log_phi).margin(0.02));
    // the statistic is the minimum possible: every other xi sits above it
    CFExpansion c2 = expand(SymValue::parse("sqrt(2)"), 40);
    REQUIRE(khinchin_levy_stat(c2, 40).center_double() > v);
  }
  SECTION("sqrt(2) approaches log(1 + sqrt(2))") {
    CFExpansion cf = expand(SymValue::parse("sqrt(2)"), 40);
    const double silver = 0.8813735870195430;
    REQUIRE(khinchin_levy_stat(cf, 40).center_double() == Catch::Approx(silver).margin(0.03));
  }
}

TEST_CASE("expansion precondition violations") {
  CFExpansion cf = expand(SymValue::parse("golden"), 5);
  REQUIRE_THROWS_AS(inverse_log_q_sum(cf, 6), std::invalid_argument);
  REQUIRE_THROWS_AS(khinchin_levy_stat(cf, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(expand(SymValue::parse("golden"), -1), std::invalid_argument);
}
