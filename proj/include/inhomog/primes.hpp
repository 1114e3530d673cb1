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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "inhomog/rng.hpp"

namespace inhomog {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs.  The witness set
// {2,3,5,7,11,13,17,19,23,29,31,37} decides primality for all n < 3.3e24,
// which covers the full uint64_t range.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

enum class Primality { Composite, Prime, ProbablePrime };

// Primality for arbitrary-size integers: exact below 2^64, Miller-Rabin with
// `rounds` pseudo-random bases above (bases drawn from a fixed-seed counter
// stream so results are reproducible).
inline Primality classify_prime(const mpz_class& n, int rounds = 64) {
  if (n < 2) return Primality::Composite;
  if (n.fits_ulong_p() && sizeof(unsigned long) == 8) {
    return is_prime_u64(n.get_ui()) ? Primality::Prime : Primality::Composite;
  }
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::Composite;
  }
  mpz_class d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  CounterRng rng(0x5f3759df, 0xabcdef);
  mpz_class a, x, n1 = n - 1;
  for (int r = 0; r < rounds; ++r) {
    // a in [2, n-2]; sampled via 64-bit draws reduced mod (n-3).
    a = mpz_class(rng.next_u64());
    a = 2 + a % (n - 3);
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n1) continue;
    bool witness = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = (x * x) % n;
      if (x == n1) {
        witness = false;
        break;
      }
    }
    if (witness) return Primality::Composite;
  }
  return Primality::ProbablePrime;
}

inline bool probably_prime(const mpz_class& n, int rounds = 64) {
  return classify_prime(n, rounds) != Primality::Composite;
}

namespace detail {

// Pollard rho (Brent variant) on a known composite with no factor < 1e6.
inline mpz_class pollard_rho(const mpz_class& n, CounterRng& rng) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  while (true) {
    mpz_class x = mpz_class(rng.next_u64()) % n;
    mpz_class c = 1 + mpz_class(rng.next_u64()) % (n - 1);
    mpz_class y = x, d = 1, diff;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      diff = x - y;
      if (diff == 0) break;  // cycle without factor; retry with new (x, c)
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 0 && d != 1 && d != n) return d;
  }
}

inline void factor_into(const mpz_class& n, std::map<mpz_class, unsigned>& out, CounterRng& rng) {
  if (n == 1) return;
  if (probably_prime(n)) {
    ++out[n];
    return;
  }
  mpz_class d = pollard_rho(n, rng);
  factor_into(d, out, rng);
  factor_into(n / d, out, rng);
}

}  // namespace detail

// Exact factorization: trial division by small primes, then rho splitting.
inline std::map<mpz_class, unsigned> factorize(mpz_class n) {
  std::map<mpz_class, unsigned> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (unsigned long p = 2; p < 100000ul && mpz_class(p) * p <= n; p = (p == 2 ? 3 : p + 2)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[mpz_class(p)];
      n /= p;
    }
  }
  if (n > 1) {
    CounterRng rng(0x9e3779b9, 0xfac70);
    detail::factor_into(n, out, rng);
  }
  return out;
}

// Exact Euler totient via factorization.
inline mpz_class euler_phi(const mpz_class& q) {
  if (q <= 0) return 0;
  if (q == 1) return 1;
  mpz_class phi = q;
  for (const auto& [p, e] : factorize(q)) {
    phi = phi / p * (p - 1);
  }
  return phi;
}

// phi(1..n) by sieve, for bulk summation.
inline std::vector<std::uint64_t> totient_sieve(std::uint64_t n) {
  std::vector<std::uint64_t> phi(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) phi[i] = i;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (phi[p] == p) {  // p prime
      for (std::uint64_t m = p; m <= n; m += p) phi[m] -= phi[m] / p;
    }
  }
  return phi;
}

}  // namespace inhomog
