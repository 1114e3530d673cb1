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

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "inhomog/continued_fraction.hpp"
#include "inhomog/primes.hpp"
#include "inhomog/real_ball.hpp"
#include "inhomog/symbolic.hpp"
#include "inhomog/unimodular.hpp"

namespace inhomog {

// How a constructed candidate's error/height bounds were classified:
//   TightSameSign: |q xi + p - y| < 1/q_{k+1} and |q| < 2 q_{k+1}
//   MixedSign:     |q xi + p - y| < 2/q_{k+1} and |q| < q_{k+1}
// Either one implies |q xi + p - y| <= 2/|q|.  Oracle/Orbit mark records
// produced by the exhaustive search and the lattice-orbit route instead.
enum class BoundCase { TightSameSign, MixedSign, Oracle, Orbit };

inline const char* to_string(BoundCase b) {
  switch (b) {
    case BoundCase::TightSameSign: return "same_sign";
    case BoundCase::MixedSign: return "mixed_sign";
    case BoundCase::Oracle: return "oracle";
    case BoundCase::Orbit: return "orbit";
  }
  return "?";
}

struct SolutionRecord {
  mpz_class p, q;
  RealBall error;  // contains |q xi + p - y|
  bool coprime = false;
  BoundCase bound_case = BoundCase::Oracle;
  std::string source;
  bool degenerate = false;  // q == 0, excluded from solution streams
  // provenance for construction-based records
  long k = -1;
  mpz_class n_k, n_k1;
};

struct TransferenceStep {
  long k = 0;
  SymValue nu_k, nu_k1;  // nu_k = (-1)^{k+1} q_k y, exact
  RealBall nu_k_ball, nu_k1_ball;
  std::vector<mpz_class> n_choices_k, n_choices_k1;  // floor/ceil, collapsed when integral
  std::vector<SolutionRecord> candidates;            // up to 4, degenerate ones flagged
};

namespace detail {

// floor and ceil of an exact symbolic value; they collapse when the value is
// an integer (exactly detectable for rationals, impossible otherwise).
inline std::pair<mpz_class, mpz_class> floor_ceil_sym(const SymValue& v, const PrecisionPolicy& pol) {
  if (v.is_rational()) {
    const mpq_class& x = v.exact_rational();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    if (mpq_class(fl) == x) return {fl, fl};
    return {fl, fl + 1};
  }
  for (mpfr_prec_t prec = pol.start_bits;; prec = pol.next(prec)) {
    auto fl = v.eval(prec).floor_certified();
    if (fl) return {*fl, *fl + 1};
    if (!pol.can_escalate(prec))
      throw PrecisionExhausted("floor of construction shift undecided at precision cap");
  }
}

}  // namespace detail

// nu_k = (-1)^{k+1} q_k y, exact.
inline SymValue construction_shift(const CFExpansion& cf, const SymValue& y, long k) {
  SymValue qk = SymValue::rational(mpq_class(cf.q.at(k)));
  SymValue v = qk * y;
  return (k % 2 == 0) ? -v : v;
}

// Error of a candidate in the telescoped form
//   (n_k - nu_k)(q_{k+1} xi - p_{k+1}) + (n_{k+1} - nu_{k+1})(q_k xi - p_k),
// which avoids the cancellation of the direct q*xi + p - y evaluation.
inline RealBall construction_error(const CFExpansion& cf, const SymValue& y, long k,
                                   const mpz_class& nk, const mpz_class& nk1, mpfr_prec_t prec) {
  SymValue dk = SymValue::rational(mpq_class(nk)) - construction_shift(cf, y, k);
  SymValue dk1 = SymValue::rational(mpq_class(nk1)) - construction_shift(cf, y, k + 1);
  RealBall rk = convergent_residual(cf, k, prec);
  RealBall rk1 = convergent_residual(cf, k + 1, prec);
  RealBall v = dk.eval(prec) * rk1 + dk1.eval(prec) * rk;
  return abs_ball(v);
}

// Sign classification of (n_k - nu_k, n_{k+1} - nu_{k+1}); a zero difference
// counts as compatible with either sign and lands in TightSameSign.
inline BoundCase classify_bound(const CFExpansion& cf, const SymValue& y, long k,
                                const mpz_class& nk, const mpz_class& nk1) {
  SymValue dk = SymValue::rational(mpq_class(nk)) - construction_shift(cf, y, k);
  SymValue dk1 = SymValue::rational(mpq_class(nk1)) - construction_shift(cf, y, k + 1);
  int s1 = dk.sign();
  int s2 = dk1.sign();
  if (s1 == 0 || s2 == 0 || s1 == s2) return BoundCase::TightSameSign;
  return BoundCase::MixedSign;
}

// Builds the up-to-four candidate pairs at index k:
//   q = n_k q_{k+1} + n_{k+1} q_k,   p = -n_k p_{k+1} - n_{k+1} p_k
// with n ranging over floor/ceil of the shifts.  Candidates with q = 0 are
// emitted with the degenerate flag and never enter solution streams.
inline TransferenceStep build_candidates(const CFExpansion& cf, const SymValue& y, long k,
                                         const PrecisionPolicy& pol = {}) {
  if (k < 0 || k + 1 > cf.depth())
    throw std::invalid_argument("build_candidates: need convergents k and k+1");
  TransferenceStep step;
  step.k = k;
  step.nu_k = construction_shift(cf, y, k);
  step.nu_k1 = construction_shift(cf, y, k + 1);
  const mpfr_prec_t prec = std::min<mpfr_prec_t>(
      pol.max_bits, std::max<mpfr_prec_t>(pol.start_bits,
                                          2 * mpz_sizeinbase(cf.q[k + 1].get_mpz_t(), 2) + 96));
  step.nu_k_ball = step.nu_k.eval(prec);
  step.nu_k1_ball = step.nu_k1.eval(prec);

  auto [fk, ck] = detail::floor_ceil_sym(step.nu_k, pol);
  auto [fk1, ck1] = detail::floor_ceil_sym(step.nu_k1, pol);
  step.n_choices_k.push_back(fk);
  if (ck != fk) step.n_choices_k.push_back(ck);
  step.n_choices_k1.push_back(fk1);
  if (ck1 != fk1) step.n_choices_k1.push_back(ck1);

  for (const mpz_class& nk : step.n_choices_k) {
    for (const mpz_class& nk1 : step.n_choices_k1) {
      SolutionRecord rec;
      rec.k = k;
      rec.n_k = nk;
      rec.n_k1 = nk1;
      rec.q = nk * cf.q[k + 1] + nk1 * cf.q[k];
      rec.p = -nk * cf.p[k + 1] - nk1 * cf.p[k];
      rec.source = "transference";
      rec.degenerate = (rec.q == 0);
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), rec.p.get_mpz_t(), rec.q.get_mpz_t());
      rec.coprime = (g == 1);
      rec.error = construction_error(cf, y, k, nk, nk1, prec);
      rec.bound_case = classify_bound(cf, y, k, nk, nk1);
      step.candidates.push_back(std::move(rec));
    }
  }
  return step;
}

// Certified re-check of a candidate's classified bounds and of the product
// bound |q xi + p - y| * |q| <= 2.  `undecided` is set when the precision
// cap is reached without a decision (the bound then neither holds nor is
// refuted at the available precision).
struct BoundCheck {
  bool product_bound_holds = false;  // error * |q| <= 2
  bool case_bound_holds = false;     // the (error, |q|) bounds of the classified case
  bool cross_check_ok = false;       // telescoped error consistent with direct evaluation
  bool undecided = false;
};

inline BoundCheck check_candidate_bounds(const CFExpansion& cf, const SymValue& y,
                                         const SolutionRecord& cand,
                                         const PrecisionPolicy& pol = {}) {
  BoundCheck out;
  if (cand.degenerate) {
    out.undecided = true;
    return out;
  }
  const mpz_class q_abs = abs(cand.q);
  const mpz_class& qk1 = cf.q.at(cand.k + 1);
  // exact height bounds
  const bool height_ok = (cand.bound_case == BoundCase::TightSameSign)
                             ? (q_abs < 2 * qk1)
                             : (q_abs < qk1);
  const mpq_class err_cap = (cand.bound_case == BoundCase::TightSameSign)
                                ? mpq_class(1) / mpq_class(qk1)
                                : mpq_class(2) / mpq_class(qk1);
  const mpq_class product_cap(2);
  TargetProblem prob{cf.xi, y, ""};

  const mpfr_prec_t prec0 = std::min<mpfr_prec_t>(
      pol.max_bits,
      std::max<mpfr_prec_t>(pol.start_bits, 2 * mpz_sizeinbase(qk1.get_mpz_t(), 2) + 96));
  for (mpfr_prec_t prec = prec0;; prec = pol.next(prec)) {
    RealBall err = construction_error(cf, y, cand.k, cand.n_k, cand.n_k1, prec);
    RealBall direct = eval_linear_form(cand.p, cand.q, prob, prec);
    // the two routes must describe one number: their enclosures overlap
    out.cross_check_ok = compare_certified(err, direct) == Cmp::Undecided;
    RealBall product = mul_z(err, q_abs);

    bool prod_done = false, case_done = false;
    if (certified_le_q(product, product_cap)) {
      out.product_bound_holds = true;
      prod_done = true;
    } else if (certified_ge_q(product, product_cap)) {
      prod_done = true;  // certified violation
    }
    if (certified_lt_q(err, err_cap)) {
      out.case_bound_holds = height_ok;
      case_done = true;
    } else if (certified_ge_q(err, err_cap)) {
      case_done = true;
    }
    if (prod_done && case_done) return out;
    if (!pol.can_escalate(prec)) {
      out.undecided = true;
      return out;
    }
  }
}

// Coprime, non-degenerate candidates over a k range, deduplicated by (p, q)
// in first-seen order (k ascending, then candidate order).
inline std::vector<SolutionRecord> solution_stream(const CFExpansion& cf, const SymValue& y,
                                                   long k_lo, long k_hi,
                                                   const PrecisionPolicy& pol = {}) {
  std::vector<SolutionRecord> out;
  std::set<std::pair<mpz_class, mpz_class>> seen;
  for (long k = std::max(0L, k_lo); k <= k_hi && k + 1 <= cf.depth(); ++k) {
    TransferenceStep step = build_candidates(cf, y, k, pol);
    for (auto& cand : step.candidates) {
      if (cand.degenerate || !cand.coprime) continue;
      if (!seen.insert({cand.p, cand.q}).second) continue;
      out.push_back(cand);
    }
  }
  return out;
}

// The four gcd conditions on floor/ceil of y q_k and y q_{k+1}; if any of
// them holds, a coprime candidate exists at index k.
struct CoprimalityCheck {
  bool satisfied = false;
  std::array<bool, 4> which{};  // ff, cc, fc, cf
  mpz_class floor_k, ceil_k, floor_k1, ceil_k1;
};

inline CoprimalityCheck coprimality_condition(const CFExpansion& cf, const SymValue& y, long k,
                                              const PrecisionPolicy& pol = {}) {
  if (k < 0 || k + 1 > cf.depth())
    throw std::invalid_argument("coprimality_condition: need convergents k and k+1");
  CoprimalityCheck out;
  SymValue yqk = SymValue::rational(mpq_class(cf.q[k])) * y;
  SymValue yqk1 = SymValue::rational(mpq_class(cf.q[k + 1])) * y;
  std::tie(out.floor_k, out.ceil_k) = detail::floor_ceil_sym(yqk, pol);
  std::tie(out.floor_k1, out.ceil_k1) = detail::floor_ceil_sym(yqk1, pol);
  auto coprime = [](const mpz_class& x, const mpz_class& z) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), z.get_mpz_t());
    return g == 1;
  };
  out.which[0] = coprime(out.floor_k, out.floor_k1);
  out.which[1] = coprime(out.ceil_k, out.ceil_k1);
  out.which[2] = coprime(out.floor_k, out.ceil_k1);
  out.which[3] = coprime(out.ceil_k, out.floor_k1);
  out.satisfied = out.which[0] || out.which[1] || out.which[2] || out.which[3];
  return out;
}

// One row of the prime-floor scan.
struct PrimeFloorRow {
  long k = 0;
  mpz_class floor_yqk;
  Primality primality = Primality::Composite;
  bool unit = false;  // floor is 1: coprime to everything outright
  bool coprimality_satisfied = false;
  std::vector<SolutionRecord> solutions;
};

// Scans k <= k_max: reports whether floor(y q_k) is prime, and where it is
// (or is the unit 1) emits the coprime constructed solutions at that index.
inline std::vector<PrimeFloorRow> prime_floor_scan(const CFExpansion& cf, const SymValue& y,
                                                   long k_max, const PrecisionPolicy& pol = {}) {
  if (y.sign() <= 0) throw std::invalid_argument("prime_floor_scan: y must be positive");
  std::vector<PrimeFloorRow> rows;
  for (long k = 0; k <= k_max && k + 1 <= cf.depth(); ++k) {
    PrimeFloorRow row;
    row.k = k;
    SymValue yqk = SymValue::rational(mpq_class(cf.q[k])) * y;
    row.floor_yqk = detail::floor_ceil_sym(yqk, pol).first;
    row.primality = classify_prime(row.floor_yqk);
    row.unit = (row.floor_yqk == 1);
    if (row.primality != Primality::Composite || row.unit) {
      row.coprimality_satisfied = coprimality_condition(cf, y, k, pol).satisfied;
      TransferenceStep step = build_candidates(cf, y, k, pol);
      for (auto& cand : step.candidates) {
        if (!cand.degenerate && cand.coprime) row.solutions.push_back(std::move(cand));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Unimodular change of target: xi' = (a xi + b)/(c xi + d), y' = y/(c xi + d)
// with c xi + d > 0, and the solution carried along by inverting the height
// substitution: q' = d q - c p, p' = -b q + a p.  The error scales by
// 1/(c xi + d), reported as kappa_scale.
struct TransportResult {
  TargetProblem prob;
  SolutionRecord sol;
  RealBall kappa_scale;
};

inline TransportResult transport_solution(const SolutionRecord& sol, const UnimodMatrix& g,
                                          const TargetProblem& prob,
                                          const PrecisionPolicy& pol = {}) {
  if (!g.is_unimodular()) throw std::invalid_argument("transport_solution: determinant must be 1");
  SymValue denom = SymValue::integer(g.c) * prob.xi + SymValue::integer(g.d);
  if (denom.sign() <= 0)
    throw std::domain_error("transport_solution: c*xi + d must be positive");
  TransportResult out;
  out.prob.xi = (SymValue::integer(g.a) * prob.xi + SymValue::integer(g.b)) / denom;
  out.prob.y = prob.y / denom;
  out.prob.label = prob.label + " (transported)";
  out.sol.q = mpz_class(g.d) * sol.q - mpz_class(g.c) * sol.p;
  out.sol.p = -mpz_class(g.b) * sol.q + mpz_class(g.a) * sol.p;
  out.sol.source = sol.source + "+transport";
  out.sol.bound_case = sol.bound_case;
  out.sol.degenerate = (out.sol.q == 0);
  mpz_class gg;
  mpz_gcd(gg.get_mpz_t(), out.sol.p.get_mpz_t(), out.sol.q.get_mpz_t());
  out.sol.coprime = (gg == 1);
  out.sol.error = eval_linear_form_auto(out.sol.p, out.sol.q, out.prob, 64, pol);
  out.kappa_scale = SymValue::integer(1).eval(pol.start_bits) / denom.eval(pol.start_bits);
  return out;
}

// Exact identity nu_k q_{k+1} + nu_{k+1} q_k = 0.
inline bool shift_relation_is_zero(const CFExpansion& cf, const SymValue& y, long k) {
  SymValue lhs = construction_shift(cf, y, k) * SymValue::rational(mpq_class(cf.q.at(k + 1))) +
                 construction_shift(cf, y, k + 1) * SymValue::rational(mpq_class(cf.q.at(k)));
  return lhs == SymValue::rational(mpq_class(0));
}

// Ball for nu_k (q_{k+1} xi - p_{k+1}) + nu_{k+1} (q_k xi - p_k); it must
// contain y.
inline RealBall shift_relation_y(const CFExpansion& cf, const SymValue& y, long k,
                                 mpfr_prec_t prec) {
  RealBall rk = convergent_residual(cf, k, prec);
  RealBall rk1 = convergent_residual(cf, k + 1, prec);
  return construction_shift(cf, y, k).eval(prec) * rk1 +
         construction_shift(cf, y, k + 1).eval(prec) * rk;
}

}  // namespace inhomog
