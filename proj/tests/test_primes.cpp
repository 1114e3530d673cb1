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

#include "inhomog/primes.hpp"
#include "inhomog/rng.hpp"

using namespace inhomog;

namespace {

// independent reference
bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("deterministic Miller-Rabin agrees with trial division up to 100000") {
  for (std::uint64_t n = 0; n <= 100000; ++n) {
    if (is_prime_u64(n) != trial_division_prime(n)) {
      CAPTURE(n);
      FAIL("primality mismatch");
    }
  }
  SUCCEED();
}

TEST_CASE("Carmichael numbers are composite") {
  for (std::uint64_t n : {561ull, 1105ull, 1729ull, 2465ull, 2821ull, 6601ull, 8911ull}) {
    REQUIRE_FALSE(is_prime_u64(n));
  }
}

TEST_CASE("large primality") {
  // 2^89 - 1 is prime; 2^67 - 1 = 193707721 * 761838257287
  mpz_class m89 = (mpz_class(1) << 89) - 1;
  mpz_class m67 = (mpz_class(1) << 67) - 1;
  REQUIRE(classify_prime(m89) == Primality::ProbablePrime);
  REQUIRE(classify_prime(m67) == Primality::Composite);
  // within 64 bits the answer is exact
  REQUIRE(classify_prime(mpz_class("18446744073709551557")) == Primality::Prime);
  REQUIRE(classify_prime(mpz_class(7919)) == Primality::Prime);
}

TEST_CASE("factorization reassembles and splits large factors") {
  CounterRng rng(77, 7);
  for (int trial = 0; trial < 50; ++trial) {
    mpz_class n = mpz_class(rng.next_below(1000000) + 2);
    mpz_class prod = 1;
    for (const auto& [p, e] : factorize(n)) {
      REQUIRE(probably_prime(p));
      for (unsigned i = 0; i < e; ++i) prod *= p;
    }
    REQUIRE(prod == n);
  }
  // product of two 10-digit primes forces the rho path
  mpz_class a("2147483647"), b("2305843009213693951");
  auto f = factorize(a * b);
  REQUIRE(f.size() == 2);
  REQUIRE(f.count(a) == 1);
  REQUIRE(f.count(b) == 1);
}

TEST_CASE("euler phi") {
  REQUIRE(euler_phi(1) == 1);
  REQUIRE(euler_phi(12) == 4);
  REQUIRE(euler_phi(mpz_class("1000003")) == mpz_class("1000002"));  // prime
  // phi(p) = p - 1 for primes, phi(p^2) = p(p-1)
  for (std::uint64_t p : {2ull, 3ull, 5ull, 97ull, 251ull}) {
    REQUIRE(euler_phi(mpz_class(p)) == mpz_class(p - 1));
    REQUIRE(euler_phi(mpz_class(p * p)) == mpz_class(p * (p - 1)));
  }
}

TEST_CASE("totient sieve matches the factorization totient") {
  auto phi = totient_sieve(300);
  for (std::uint64_t q = 1; q <= 300; ++q) {
    REQUIRE(mpz_class(phi[q]) == euler_phi(mpz_class(q)));
  }
}

TEST_CASE("counter rng is addressable and deterministic") {
  CounterRng a(123, 9, 0);
  CounterRng b(123, 9, 0);
  for (int i = 0; i < 16; ++i) REQUIRE(a.next_u64() == b.next_u64());

  CounterRng c(123, 9, 0);
  CounterRng d(123, 9, 5);
  for (int i = 0; i < 5; ++i) c.next_u64();
  REQUIRE(c.next_u64() == d.next_u64());

  CounterRng e1(123, 9, 0), e2(123, 10, 0);
  REQUIRE(e1.next_u64() != e2.next_u64());

  CounterRng u(7, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    double v = u.next_unit();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}
