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

#include <string>
#include <vector>

#include "inhomog/real_ball.hpp"
#include "inhomog/symbolic.hpp"

namespace inhomog {

// Continued fraction of xi with convergents p_k/q_k, indexed so that
// p_0/q_0 = a_0/1.  Invariants (checked by verify_identities):
//   q_0 >= 1 and q_k strictly increasing for k >= 1,
//   p_k q_{k+1} - p_{k+1} q_k = (-1)^{k+1},
//   |q_k xi - p_k| <= 1/q_{k+1},
//   gcd(p_k, q_k) = 1.
struct CFExpansion {
  SymValue xi;
  std::vector<mpz_class> a;
  std::vector<mpz_class> p;
  std::vector<mpz_class> q;
  // exact rational input, expansion complete
  bool terminated = false;
  // stopped before the requested depth (literal trust horizon)
  bool truncated = false;
  // for decimal literals: deepest index whose quotient the literal's stated
  // precision can certify; -1 means no limit applies
  long trust_horizon = -1;

  long depth() const { return static_cast<long>(a.size()) - 1; }
};

namespace detail {

inline void push_convergent(CFExpansion& cf, const mpz_class& ak) {
  cf.a.push_back(ak);
  const size_t k = cf.a.size() - 1;
  if (k == 0) {
    cf.p.push_back(ak);
    cf.q.push_back(1);
  } else if (k == 1) {
    cf.p.push_back(ak * cf.p[0] + 1);
    cf.q.push_back(ak);
  } else {
    cf.p.push_back(ak * cf.p[k - 1] + cf.p[k - 2]);
    cf.q.push_back(ak * cf.q[k - 1] + cf.q[k - 2]);
  }
}

inline mpz_class floor_q(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return f;
}

// Exact Euclidean expansion of a rational.  For decimal literals the
// interval [x - fuzz, x + fuzz] runs alongside; a quotient counts as
// certified only while both endpoints agree on it, and the expansion is cut
// there (trust horizon).  Literal expansions therefore never report
// `terminated`: the literal stands for an unknown real nearby.
inline CFExpansion expand_rational(const SymValue& xi, long k_max) {
  CFExpansion cf;
  cf.xi = xi;
  mpq_class x = xi.exact_rational();
  const bool literal = xi.is_decimal_literal();
  mpq_class lo = x - xi.fuzz(), hi = x + xi.fuzz();
  bool interval_alive = literal;
  for (long k = 0; k <= k_max; ++k) {
    mpz_class ak = floor_q(x);
    if (literal) {
      if (!interval_alive || floor_q(lo) != ak || floor_q(hi) != ak) {
        cf.truncated = true;
        cf.trust_horizon = k - 1;
        return cf;
      }
    }
    push_convergent(cf, ak);
    mpq_class frac = x - mpq_class(ak);
    if (frac == 0) {
      if (!literal) {
        cf.terminated = true;
        return cf;
      }
      // literal center happens to be exactly at a rational stop; the
      // interval around it cannot certify anything further
      cf.truncated = k < k_max;
      cf.trust_horizon = k;
      return cf;
    }
    if (literal) {
      mpq_class flo = lo - mpq_class(ak), fhi = hi - mpq_class(ak);
      if (flo <= 0) {
        interval_alive = false;  // next floor cannot be certified
      } else {
        lo = 1 / fhi;
        hi = 1 / flo;
      }
    }
    x = 1 / frac;
  }
  if (literal) cf.trust_horizon = cf.depth();
  return cf;
}

}  // namespace detail

// Expansion to depth k_max.  Certified-irrational inputs use interval
// arithmetic with precision escalation: if any floor is undecided the whole
// run restarts at doubled precision, so the result is deterministic and
// independent of the starting precision.
inline CFExpansion expand(const SymValue& xi, long k_max, const PrecisionPolicy& pol = {}) {
  if (k_max < 0) throw std::invalid_argument("expand: k_max must be >= 0");
  if (xi.is_rational()) return detail::expand_rational(xi, k_max);

  for (mpfr_prec_t prec = pol.start_bits;; prec = pol.next(prec)) {
    CFExpansion cf;
    cf.xi = xi;
    RealBall x = xi.eval(prec);
    bool ok = true;
    for (long k = 0; k <= k_max; ++k) {
      auto fl = x.floor_certified();
      if (!fl) {
        ok = false;
        break;
      }
      detail::push_convergent(cf, *fl);
      if (k == k_max) break;
      RealBall frac = add_z(x, -*fl);
      if (!frac.is_positive_certified()) {
        ok = false;
        break;
      }
      x = RealBall::from_si(1, prec) / frac;
    }
    if (ok) return cf;
    if (!pol.can_escalate(prec))
      throw PrecisionExhausted("expand: partial quotient undecided at precision cap");
  }
}

inline CFExpansion expand(const TargetProblem& prob, long k_max, const PrecisionPolicy& pol = {}) {
  return expand(prob.xi, k_max, pol);
}

// Ball containing q_k*xi - p_k.
inline RealBall convergent_residual(const CFExpansion& cf, long k, mpfr_prec_t prec = 0) {
  const mpz_class& qk = cf.q.at(k);
  const mpz_class& pk = cf.p.at(k);
  if (prec == 0) {
    prec = static_cast<mpfr_prec_t>(2 * mpz_sizeinbase(qk.get_mpz_t(), 2) + 96);
  }
  RealBall xi = cf.xi.eval(prec);
  return add_z(mul_z(xi, qk), -pk);
}

struct IdentityReport {
  struct Failure {
    long k;
    std::string what;
  };
  std::vector<Failure> failures;
  long undecided = 0;

  bool all_ok() const { return failures.empty() && undecided == 0; }
};

// Exact determinant/gcd/recurrence checks plus the certified residual bound
// |q_k xi - p_k| <= 1/q_{k+1}.  Failures are collected, not thrown.
inline IdentityReport verify_identities(const CFExpansion& cf, const PrecisionPolicy& pol = {}) {
  IdentityReport rep;
  const long kmax = cf.depth();
  for (long k = 0; k <= kmax; ++k) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), cf.p[k].get_mpz_t(), cf.q[k].get_mpz_t());
    if (g != 1) rep.failures.push_back({k, "gcd(p_k, q_k) != 1"});
    if (k == 0) {
      if (cf.q[0] != 1) rep.failures.push_back({k, "q_0 != 1"});
    } else {
      if (cf.a[k] < 1) rep.failures.push_back({k, "partial quotient a_k < 1"});
      if (k >= 2 && cf.q[k] <= cf.q[k - 1]) rep.failures.push_back({k, "q_k not increasing"});
    }
    if (k >= 2) {
      if (cf.p[k] != cf.a[k] * cf.p[k - 1] + cf.p[k - 2] ||
          cf.q[k] != cf.a[k] * cf.q[k - 1] + cf.q[k - 2]) {
        rep.failures.push_back({k, "three-term recurrence violated"});
      }
    }
  }
  for (long k = 0; k + 1 <= kmax; ++k) {
    mpz_class det = cf.p[k] * cf.q[k + 1] - cf.p[k + 1] * cf.q[k];
    mpz_class want = (k % 2 == 0) ? -1 : 1;  // (-1)^{k+1}
    if (det != want) rep.failures.push_back({k, "determinant identity violated"});

    mpq_class bound(1);
    bound /= mpq_class(cf.q[k + 1]);
    if (cf.xi.is_rational()) {
      mpq_class res = mpq_class(cf.q[k]) * cf.xi.exact_rational() - mpq_class(cf.p[k]);
      if (abs(res) > bound) rep.failures.push_back({k, "residual bound violated"});
      continue;
    }
    bool decided = false;
    for (mpfr_prec_t prec = pol.start_bits;; prec = pol.next(prec)) {
      RealBall res = abs_ball(convergent_residual(cf, k, prec));
      if (certified_le_q(res, bound)) {
        decided = true;
        break;
      }
      if (certified_ge_q(res, bound)) {
        rep.failures.push_back({k, "residual bound violated"});
        decided = true;
        break;
      }
      if (!pol.can_escalate(prec)) break;
    }
    if (!decided) ++rep.undecided;
  }
  return rep;
}

// Certified check that consecutive residuals q_k xi - p_k alternate in sign.
// Returns the number of indices whose sign could not be certified.
inline long residual_sign_alternation_failures(const CFExpansion& cf, long& undecided,
                                               const PrecisionPolicy& pol = {}) {
  long failures = 0;
  undecided = 0;
  long last = cf.depth();
  if (cf.terminated) --last;  // final residual is exactly zero
  for (long k = 0; k <= last; ++k) {
    int want = (k % 2 == 0) ? 1 : -1;
    if (cf.xi.is_rational()) {
      mpq_class res = mpq_class(cf.q[k]) * cf.xi.exact_rational() - mpq_class(cf.p[k]);
      if (sgn(res) != want) ++failures;
      continue;
    }
    bool done = false;
    for (mpfr_prec_t prec = pol.start_bits;; prec = pol.next(prec)) {
      RealBall res = convergent_residual(cf, k, prec);
      if (res.is_positive_certified()) {
        if (want != 1) ++failures;
        done = true;
        break;
      }
      if (res.is_negative_certified()) {
        if (want != -1) ++failures;
        done = true;
        break;
      }
      if (!pol.can_escalate(prec)) break;
    }
    if (!done) ++undecided;
  }
  return failures;
}

// Partial sum of 1/max(1, ln q_k) for k = 0..K (natural log throughout).
inline RealBall inverse_log_q_sum(const CFExpansion& cf, long K, mpfr_prec_t prec = 256) {
  if (K > cf.depth()) throw std::invalid_argument("inverse_log_q_sum: K beyond expansion depth");
  RealBall sum(prec);
  RealBall one = RealBall::from_si(1, prec);
  for (long k = 0; k <= K; ++k) {
    RealBall lq = log_ball(RealBall::from_z(cf.q[k], prec));
    RealBall denom = max_ball(one, lq);
    sum = sum + one / denom;
  }
  return sum;
}

// (ln q_k) / k.
inline RealBall khinchin_levy_stat(const CFExpansion& cf, long k, mpfr_prec_t prec = 256) {
  if (k < 1 || k > cf.depth()) throw std::invalid_argument("khinchin_levy_stat: k out of range");
  RealBall lq = log_ball(RealBall::from_z(cf.q[k], prec));
  return div_z(lq, mpz_class(k));
}

}  // namespace inhomog
