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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inhomog/parallel.hpp"
#include "inhomog/primes.hpp"
#include "inhomog/real_ball.hpp"
#include "inhomog/rng.hpp"

namespace inhomog {

// Approximating function psi(q) = c * q^{-alpha} * log(q+1)^{-beta} with
// rational parameters, clamped to 1/2 (the normalization under which the
// per-q strip unions are disjoint).  The series sum psi diverges iff
// alpha < 1, or alpha = 1 and beta <= 1.
struct PsiSpec {
  mpq_class c{1};
  mpq_class alpha{1};
  mpq_class beta{0};

  static PsiSpec parse(const std::string& text) {
    // "c,alpha,beta" with decimal or fractional components
    PsiSpec psi;
    size_t p1 = text.find(',');
    size_t p2 = p1 == std::string::npos ? std::string::npos : text.find(',', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::invalid_argument("psi: expected 'c,alpha,beta'");
    psi.c = parse_q(text.substr(0, p1));
    psi.alpha = parse_q(text.substr(p1 + 1, p2 - p1 - 1));
    psi.beta = parse_q(text.substr(p2 + 1));
    if (psi.c < 0) throw std::invalid_argument("psi: c must be >= 0");
    if (psi.alpha < 0) throw std::invalid_argument("psi: alpha must be >= 0");
    return psi;
  }

  bool series_diverges() const { return c != 0 && (alpha < 1 || (alpha == 1 && beta <= 1)); }

  // exact rational value when alpha is an integer and beta = 0
  std::optional<mpq_class> eval_exact(std::uint64_t q) const {
    if (beta != 0 || alpha.get_den() != 1) return std::nullopt;
    mpq_class v = c;
    mpz_class qa;
    mpz_pow_ui(qa.get_mpz_t(), mpz_class(q).get_mpz_t(), alpha.get_num().get_ui());
    v /= mpq_class(qa);
    if (v > mpq_class(1, 2)) v = mpq_class(1, 2);
    return v;
  }

  double eval_d(std::uint64_t q) const {
    double v = c.get_d() * std::pow(static_cast<double>(q), -alpha.get_d()) *
               std::pow(std::log(static_cast<double>(q) + 1.0), -beta.get_d());
    return v > 0.5 ? 0.5 : v;
  }

  RealBall eval_ball(std::uint64_t q, mpfr_prec_t prec = 128) const {
    // c * exp(-alpha ln q - beta ln ln(q+1)), clamped at 1/2
    RealBall lnq = log_ball(RealBall::from_si(static_cast<long>(q), prec));
    RealBall lnq1 = log_ball(RealBall::from_si(static_cast<long>(q) + 1, prec));
    RealBall expo = RealBall::from_q(-alpha, prec) * lnq +
                    RealBall::from_q(-beta, prec) * log_ball(lnq1);
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    expo.lower_bound(lo);
    expo.upper_bound(hi);
    mpfr_exp(lo, lo, MPFR_RNDD);
    mpfr_exp(hi, hi, MPFR_RNDU);
    RealBall v = RealBall::from_q(c, prec) * RealBall::from_endpoints(lo, hi, prec);
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (certified_le_q(v, mpq_class(1, 2))) return v;
    if (certified_ge_q(v, mpq_class(1, 2))) return RealBall::from_q(mpq_class(1, 2), prec);
    // enclosure straddles the clamp: intersect with (-inf, 1/2]
    mpfr_t l2, h2;
    mpfr_init2(l2, prec);
    mpfr_init2(h2, prec);
    v.lower_bound(l2);
    mpfr_set_d(h2, 0.5, MPFR_RNDN);
    RealBall out = RealBall::from_endpoints(l2, h2, prec);
    mpfr_clear(l2);
    mpfr_clear(h2);
    return out;
  }

  // Numeric monotonicity check over [1, q_max].
  bool non_increasing_over(std::uint64_t q_max) const {
    double prev = eval_d(1);
    for (std::uint64_t q = 2; q <= q_max; ++q) {
      double cur = eval_d(q);
      if (cur > prev * (1 + 1e-12)) return false;
      prev = cur;
    }
    return true;
  }

  // Ratio bounds of psi(f*l)/psi(l) for the scaling condition: returns
  // (min, max) over l <= l_max for factors {2, 3, 5}; both must be positive
  // and finite for the family to qualify.
  std::pair<double, double> scaling_ratio_bounds(std::uint64_t l_max = 10000) const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int f : {2, 3, 5}) {
      for (std::uint64_t l = 1; l <= l_max; ++l) {
        double r = eval_d(static_cast<std::uint64_t>(f) * l) / eval_d(l);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    return {lo, hi};
  }

 private:
  static mpq_class parse_q(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) return mpq_class(s, 10);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    mpq_class v(num, den);
    v.canonicalize();
    return v;
  }
};

// The union of strips |q x + p - y| <= psi(q) over p coprime to q, for one
// fixed height q.  With psi <= 1/2 the strips are pairwise disjoint, so a
// point has at most one witness p.
struct StripFamily {
  std::uint64_t q;
  PsiSpec psi;

  double width() const { return psi.eval_d(q); }

  // membership of (x, y), with the witness search reduced to the two
  // integers adjacent to y - q x
  bool contains(double x, double y) const;

  // lambda(E_q(psi) n [0,1]^2) when psi(q) is rational
  mpq_class measure_exact() const;
};

// lambda(E_q(psi) n [0,1]^2) = 2 phi(q) psi(q) / q, exact when psi(q) is.
inline mpq_class strip_measure_exact(std::uint64_t q, const mpq_class& psi_q) {
  if (psi_q > mpq_class(1, 2)) throw std::invalid_argument("strip_measure_exact: psi(q) > 1/2");
  if (psi_q < 0) throw std::invalid_argument("strip_measure_exact: psi(q) < 0");
  mpq_class m = 2 * mpq_class(euler_phi(mpz_class(q))) * psi_q / mpq_class(q);
  m.canonicalize();
  return m;
}

inline mpq_class strip_measure_exact(std::uint64_t q, const PsiSpec& psi) {
  auto v = psi.eval_exact(q);
  if (!v) throw std::invalid_argument("strip_measure_exact: psi(q) is not rational for this family");
  return strip_measure_exact(q, *v);
}

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Membership of (x, y) in E_q(psi): some p coprime to q has
// |q x + p - y| <= psi(q).  Only the two integers adjacent to y - q x can
// qualify once psi <= 1/2, so the test is O(1).
inline bool strip_member(double x, double y, std::uint64_t q, double psi_q) {
  const double t = static_cast<double>(q) * x - y;
  const double f = std::floor(-t);   // candidate p below
  const double d1 = std::abs(t + f);
  if (d1 <= psi_q) {
    const long long p = static_cast<long long>(f);
    if (std::gcd(static_cast<unsigned long long>(p < 0 ? -p : p), q) == 1) return true;
  }
  const double d2 = std::abs(t + f + 1);
  if (d2 <= psi_q) {
    const long long p = static_cast<long long>(f) + 1;
    if (std::gcd(static_cast<unsigned long long>(p < 0 ? -p : p), q) == 1) return true;
  }
  return false;
}

// Distance of q x - y to the nearest integer (no coprimality).
inline bool interval_member(double x, double y, std::uint64_t q, double psi_q) {
  const double t = static_cast<double>(q) * x - y;
  const double d = std::abs(t - std::nearbyint(t));
  return d <= psi_q;
}

}  // namespace detail

inline bool StripFamily::contains(double x, double y) const {
  return detail::strip_member(x, y, q, width());
}

inline mpq_class StripFamily::measure_exact() const { return strip_measure_exact(q, psi); }

// Monte Carlo estimate of lambda(E_q(psi) n [0,1]^2).
inline McEstimate strip_measure_mc(std::uint64_t q, const PsiSpec& psi, std::uint64_t n_samples,
                                   std::uint64_t seed, int threads = 1) {
  const double psi_q = psi.eval_d(q);
  std::vector<std::uint64_t> hits(std::max(1, threads), 0);
  parallel_chunks(static_cast<std::int64_t>(n_samples), threads,
                  [&](int chunk, std::int64_t begin, std::int64_t end) {
                    std::uint64_t h = 0;
                    for (std::int64_t i = begin; i < end; ++i) {
                      CounterRng rng(seed, q, static_cast<std::uint64_t>(2 * i));
                      const double x = rng.next_unit();
                      const double y = rng.next_unit();
                      if (detail::strip_member(x, y, q, psi_q)) ++h;
                    }
                    hits[chunk] = h;
                  });
  McEstimate out;
  out.samples = n_samples;
  out.seed = seed;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(n_samples);
  out.std_error = std::sqrt(std::max(out.estimate * (1 - out.estimate), 1e-12) /
                            static_cast<double>(n_samples));
  return out;
}

// Pairwise intersection measure for q != s: the coprime-restricted
// lambda(E_q n E_s) alongside the unrestricted product form whose exact
// value is 4 psi(q) psi(s).
struct PairIntersection {
  McEstimate coprime;    // lambda(E_q(psi) n E_s(psi) n [0,1]^2)
  McEstimate unfiltered; // double integral of chi_q(||qx-y||) chi_s(||sx-y||)
  double independence_value = 0;  // 4 psi(q) psi(s)
};

inline PairIntersection pair_intersection_mc(std::uint64_t q, std::uint64_t s, const PsiSpec& psi,
                                             std::uint64_t n_samples, std::uint64_t seed,
                                             int threads = 1) {
  if (q == s) throw std::invalid_argument("pair_intersection_mc: q and s must differ");
  const double pq = psi.eval_d(q), ps = psi.eval_d(s);
  struct H {
    std::uint64_t co = 0, un = 0;
  };
  std::vector<H> hits(std::max(1, threads));
  parallel_chunks(static_cast<std::int64_t>(n_samples), threads,
                  [&](int chunk, std::int64_t begin, std::int64_t end) {
                    H h;
                    for (std::int64_t i = begin; i < end; ++i) {
                      CounterRng rng(seed, q * 1000003u + s, static_cast<std::uint64_t>(2 * i));
                      const double x = rng.next_unit();
                      const double y = rng.next_unit();
                      if (detail::interval_member(x, y, q, pq) && detail::interval_member(x, y, s, ps))
                        ++h.un;
                      if (detail::strip_member(x, y, q, pq) && detail::strip_member(x, y, s, ps))
                        ++h.co;
                    }
                    hits[chunk] = h;
                  });
  PairIntersection out;
  out.independence_value = 4 * pq * ps;
  std::uint64_t co = 0, un = 0;
  for (auto& h : hits) {
    co += h.co;
    un += h.un;
  }
  auto fill = [&](McEstimate& e, std::uint64_t k) {
    e.samples = n_samples;
    e.seed = seed;
    e.hits = k;
    e.estimate = static_cast<double>(k) / static_cast<double>(n_samples);
    e.std_error = std::sqrt(std::max(e.estimate * (1 - e.estimate), 1e-12) /
                            static_cast<double>(n_samples));
  };
  fill(out.coprime, co);
  fill(out.unfiltered, un);
  return out;
}

// Certified partial sums: sum psi(q) and sum phi(q) psi(q) / q over q <= Q,
// and the sandwich (1/2) sum psi <= sum phi psi / q <= sum psi.
struct PartialSums {
  RealBall sum_psi;
  RealBall sum_phi_psi_over_q;
  bool left_inequality_holds = false;   // certified
  bool right_inequality_holds = false;  // certified
  bool undecided = false;
};

inline PartialSums partial_sums(const PsiSpec& psi, std::uint64_t Q, mpfr_prec_t prec = 128) {
  if (Q < 1) throw std::invalid_argument("partial_sums: Q >= 1");
  PartialSums out{RealBall(prec), RealBall(prec)};
  std::vector<std::uint64_t> phi = totient_sieve(Q);
  for (std::uint64_t q = 1; q <= Q; ++q) {
    RealBall pq = psi.eval_ball(q, prec);
    out.sum_psi = out.sum_psi + pq;
    RealBall term = div_z(mul_z(pq, mpz_class(phi[q])), mpz_class(q));
    out.sum_phi_psi_over_q = out.sum_phi_psi_over_q + term;
  }
  RealBall half_sum = div_z(out.sum_psi, mpz_class(2));
  Cmp left = compare_certified(half_sum, out.sum_phi_psi_over_q);
  Cmp right = compare_certified(out.sum_phi_psi_over_q, out.sum_psi);
  out.left_inequality_holds = left == Cmp::Less;
  out.right_inequality_holds = right == Cmp::Less;
  // exact equality situations (e.g. Q = 1, where both sums coincide) show
  // up as Undecided; settle them with a widened certified non-strict check
  if (!out.right_inequality_holds && right == Cmp::Undecided) {
    RealBall diff = out.sum_psi - out.sum_phi_psi_over_q;
    out.right_inequality_holds = !diff.is_negative_certified() && diff.contains_zero();
    if (!out.right_inequality_holds) out.undecided = true;
  }
  if (!out.left_inequality_holds && left == Cmp::Undecided) {
    RealBall diff = out.sum_phi_psi_over_q - half_sum;
    out.left_inequality_holds = !diff.is_negative_certified() && diff.contains_zero();
    if (!out.left_inequality_holds) out.undecided = true;
  }
  return out;
}

// Ratio of the classical second-moment lower bound:
//   (sum_q lambda_q)^2 / (sum_{q != s} 4 psi(q) psi(s) + sum_q 2 psi(q))
// with lambda_q = 2 phi(q) psi(q) / q.  Meaningful only for divergent psi.
struct SecondMomentRatio {
  RealBall ratio;
  bool small_Q = false;  // Q too small for the asymptotic reading
};

inline SecondMomentRatio borel_cantelli_lower_bound(const PsiSpec& psi, std::uint64_t Q,
                                                    mpfr_prec_t prec = 128) {
  if (!psi.series_diverges())
    throw std::invalid_argument("borel_cantelli_lower_bound: series converges; ratio not meaningful");
  if (Q < 1) throw std::invalid_argument("borel_cantelli_lower_bound: Q >= 1");
  std::vector<std::uint64_t> phi = totient_sieve(Q);
  RealBall sum_psi(prec), sum_psi_sq(prec), sum_lambda(prec);
  for (std::uint64_t q = 1; q <= Q; ++q) {
    RealBall pq = psi.eval_ball(q, prec);
    sum_psi = sum_psi + pq;
    sum_psi_sq = sum_psi_sq + pq * pq;
    sum_lambda = sum_lambda + mul_si(div_z(mul_z(pq, mpz_class(phi[q])), mpz_class(q)), 2);
  }
  // off-diagonal sum_{q != s} psi(q) psi(s) = (sum psi)^2 - sum psi^2
  RealBall off = sum_psi * sum_psi - sum_psi_sq;
  RealBall denom = mul_si(off, 4) + mul_si(sum_psi, 2);
  SecondMomentRatio out{sum_lambda * sum_lambda / denom, Q < 16};
  return out;
}

// Windowed Monte Carlo shadow of the convergence/divergence dichotomy:
// for each sampled (xi, y) and each dyadic window [2^j, 2^{j+1}), test for
// a coprime solution q in the window with |q xi + p - y| <= psi(q).
struct DichotomyRow {
  int j = 0;
  std::uint64_t q_lo = 0, q_hi = 0;  // [q_lo, q_hi)
  std::uint64_t hits = 0;
  std::uint64_t points = 0;
  double fraction = 0;
};

inline std::vector<DichotomyRow> dichotomy_experiment(const PsiSpec& psi, std::uint64_t n_points,
                                                      int j_lo, int j_hi, std::uint64_t seed,
                                                      int threads = 1) {
  if (j_lo < 0 || j_hi < j_lo || j_hi > 30)
    throw std::invalid_argument("dichotomy_experiment: bad window range");
  const int nwin = j_hi - j_lo + 1;
  const std::uint64_t q_max = (1ull << (j_hi + 1));
  // psi per q, precomputed once
  std::vector<double> psi_tab(q_max + 1, 0.0);
  for (std::uint64_t q = 1; q <= q_max; ++q) psi_tab[q] = psi.eval_d(q);

  std::vector<std::vector<std::uint64_t>> hits(std::max(1, threads),
                                               std::vector<std::uint64_t>(nwin, 0));
  parallel_chunks(static_cast<std::int64_t>(n_points), threads,
                  [&](int chunk, std::int64_t begin, std::int64_t end) {
                    auto& h = hits[chunk];
                    for (std::int64_t i = begin; i < end; ++i) {
                      CounterRng rng(seed, 0xd1c40, static_cast<std::uint64_t>(2 * i));
                      const double xi = rng.next_unit();
                      const double y = rng.next_unit();
                      for (int j = j_lo; j <= j_hi; ++j) {
                        const std::uint64_t lo = 1ull << j, hi = 1ull << (j + 1);
                        for (std::uint64_t q = lo; q < hi; ++q) {
                          if (detail::strip_member(xi, y, q, psi_tab[q])) {
                            ++h[j - j_lo];
                            break;
                          }
                        }
                      }
                    }
                  });
  std::vector<DichotomyRow> rows(nwin);
  for (int j = j_lo; j <= j_hi; ++j) {
    DichotomyRow& r = rows[j - j_lo];
    r.j = j;
    r.q_lo = 1ull << j;
    r.q_hi = 1ull << (j + 1);
    r.points = n_points;
    for (auto& h : hits) r.hits += h[j - j_lo];
    r.fraction = static_cast<double>(r.hits) / static_cast<double>(n_points);
  }
  return rows;
}

}  // namespace inhomog
