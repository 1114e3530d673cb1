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
#include <mpfr.h>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "inhomog/continued_fraction.hpp"
#include "inhomog/real_ball.hpp"
#include "inhomog/symbolic.hpp"
#include "inhomog/transference.hpp"

namespace inhomog {

enum class SignFilter { Positive, Negative, Both };

// Hot-loop evaluator for t = q*xi - y over a whole range of q at one fixed
// precision.  It keeps preallocated mpfr scratch and a single conservative
// radius bound valid for every |q| <= max_abs_q, so each step costs a few
// mpfr operations and no allocation.  Distances come out as certified
// enclosures [dist_lo, dist_hi].
class LinearFormScan {
 public:
  LinearFormScan(const TargetProblem& prob, std::int64_t max_abs_q, long guard_bits = 96)
      : prec_(static_cast<mpfr_prec_t>(64 + guard_bits + 64 - __builtin_clzll(static_cast<std::uint64_t>(max_abs_q) | 1))),
        xi_(prob.xi.eval(prec_)),
        y_(prob.y.eval(prec_)) {
    mpfr_init2(t_, prec_);
    mpfr_init2(u_, prec_);
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_init2(rad_, RealBall::kRadiusPrec);
    mpfr_init2(tmp_, RealBall::kRadiusPrec);
    // radius bound: Q*rad(xi) + rad(y) + a few ulps at the largest magnitude
    mpfr_set(rad_, xi_.radius(), MPFR_RNDU);
    mpfr_mul_si(rad_, rad_, max_abs_q, MPFR_RNDU);
    mpfr_add(rad_, rad_, y_.radius(), MPFR_RNDU);
    mpfr_t mag;
    mpfr_init2(mag, RealBall::kRadiusPrec);
    mpfr_abs(mag, xi_.center(), MPFR_RNDU);
    mpfr_mul_si(mag, mag, max_abs_q, MPFR_RNDU);
    mpfr_abs(tmp_, y_.center(), MPFR_RNDU);
    mpfr_add(mag, mag, tmp_, MPFR_RNDU);
    mpfr_add_ui(mag, mag, 2, MPFR_RNDU);
    mpfr_mul_2si(mag, mag, -static_cast<long>(prec_) + 3, MPFR_RNDU);
    mpfr_add(rad_, rad_, mag, MPFR_RNDU);
    mpfr_clear(mag);
  }

  ~LinearFormScan() {
    mpfr_clear(t_);
    mpfr_clear(u_);
    mpfr_clear(lo_);
    mpfr_clear(hi_);
    mpfr_clear(rad_);
    mpfr_clear(tmp_);
  }

  LinearFormScan(const LinearFormScan&) = delete;
  LinearFormScan& operator=(const LinearFormScan&) = delete;

  // Evaluates t = q*xi - y and the nearest integer n; the minimizing p for
  // |q xi + p - y| is p = -n.
  void eval(std::int64_t q) {
    mpfr_mul_si(t_, xi_.center(), q, MPFR_RNDN);
    mpfr_sub(t_, t_, y_.center(), MPFR_RNDN);
    mpfr_sub_d(u_, t_, 0.5, MPFR_RNDN);
    mpfr_get_z(n_.get_mpz_t(), u_, MPFR_RNDU);  // ceil(t - 1/2): floor tie-break
  }

  const mpz_class& nearest_m() const { return n_; }
  mpz_class best_p() const { return -n_; }

  // Certified distance enclosure of |t - m| for an integer m.
  void dist_bounds(const mpz_class& m, mpfr_t lo_out, mpfr_t hi_out) {
    mpfr_sub_z(u_, t_, m.get_mpz_t(), MPFR_RNDN);
    mpfr_abs(u_, u_, MPFR_RNDN);
    mpfr_add(hi_out, u_, rad_, MPFR_RNDU);
    mpfr_sub(lo_out, u_, rad_, MPFR_RNDD);
    if (mpfr_sgn(lo_out) < 0) mpfr_set_zero(lo_out, 1);
    // one more ulp for the subtraction rounding
    mpfr_t ulp;
    mpfr_init2(ulp, MPFR_PREC_MIN);
    if (!mpfr_zero_p(u_)) {
      mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(u_) - prec_ + 1, MPFR_RNDU);
      mpfr_add(hi_out, hi_out, ulp, MPFR_RNDU);
      mpfr_sub(lo_out, lo_out, ulp, MPFR_RNDD);
      if (mpfr_sgn(lo_out) < 0) mpfr_set_zero(lo_out, 1);
    }
    mpfr_clear(ulp);
  }

  // -1: dist <= bound certified; +1: dist > bound certified; 0: undecided.
  int cmp_dist_bound(const mpz_class& m, const mpq_class& bound) {
    dist_bounds(m, lo_, hi_);
    if (mpfr_cmp_q(hi_, bound.get_mpq_t()) <= 0) return -1;
    if (mpfr_cmp_q(lo_, bound.get_mpq_t()) > 0) return 1;
    return 0;
  }

  RealBall dist_ball(const mpz_class& m) {
    dist_bounds(m, lo_, hi_);
    return RealBall::from_endpoints(lo_, hi_, prec_);
  }

  // Certified comparison of |t - m1| vs |t - m2|: -1, +1, or 0 (undecided).
  int cmp_dists(const mpz_class& m1, const mpz_class& m2) {
    dist_bounds(m1, lo_, hi_);
    mpfr_t lo2, hi2;
    mpfr_init2(lo2, prec_);
    mpfr_init2(hi2, prec_);
    dist_bounds(m2, lo2, hi2);
    int r = 0;
    if (mpfr_cmp(hi_, lo2) < 0) {
      r = -1;
    } else if (mpfr_cmp(lo_, hi2) > 0) {
      r = 1;
    }
    mpfr_clear(lo2);
    mpfr_clear(hi2);
    return r;
  }

  // Integer window [ceil(t - w), floor(t + w)] containing every m with
  // |t - m| <= w (w rational, enclosure widened by the radius bound).
  std::pair<mpz_class, mpz_class> window(const mpq_class& w) {
    mpfr_set_q(u_, w.get_mpq_t(), MPFR_RNDU);
    mpfr_add(u_, u_, rad_, MPFR_RNDU);
    mpfr_sub(lo_, t_, u_, MPFR_RNDD);
    mpfr_add(hi_, t_, u_, MPFR_RNDU);
    mpz_class mlo, mhi;
    mpfr_get_z(mlo.get_mpz_t(), lo_, MPFR_RNDU);
    mpfr_get_z(mhi.get_mpz_t(), hi_, MPFR_RNDD);
    return {mlo, mhi};
  }

  mpfr_prec_t precision() const { return prec_; }
  double dist_to(const mpz_class& m) {
    dist_bounds(m, lo_, hi_);
    return (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)) / 2;
  }

 private:
  mpfr_prec_t prec_;
  RealBall xi_, y_;
  mpfr_t t_, u_, lo_, hi_, rad_, tmp_;
  mpz_class n_;
};

namespace detail {

inline bool coprime_zq(const mpz_class& p, std::int64_t q) {
  mpz_class g, qq(q);
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), qq.get_mpz_t());
  return g == 1;
}

template <typename Fn>
void for_each_signed_q(std::int64_t Q, SignFilter sign, Fn&& fn) {
  if (sign != SignFilter::Negative)
    for (std::int64_t q = 1; q <= Q; ++q) fn(q);
  if (sign != SignFilter::Positive)
    for (std::int64_t q = 1; q <= Q; ++q) fn(-q);
}

}  // namespace detail

// One oracle row: for each q the integer p minimizing |q xi + p - y| (the
// nearest coprime p instead when coprime_only is set).
struct BestSolutionsResult {
  std::vector<SolutionRecord> rows;
  std::vector<std::int64_t> omitted;  // q where a tie/undecided comparison blocked the row
};

inline BestSolutionsResult best_solutions(const TargetProblem& prob, std::int64_t Q,
                                          bool coprime_only = false,
                                          SignFilter sign = SignFilter::Positive) {
  if (Q < 1) throw std::invalid_argument("best_solutions: Q must be >= 1");
  BestSolutionsResult out;
  LinearFormScan scan(prob, Q);
  detail::for_each_signed_q(Q, sign, [&](std::int64_t q) {
    scan.eval(q);
    mpz_class m = scan.nearest_m();
    if (coprime_only && !detail::coprime_zq(m, q)) {
      // scan outward for the nearest coprime integers on each side; some
      // coprime residue exists within q consecutive integers, so this ends
      std::optional<mpz_class> down, up;
      const std::int64_t qa = q < 0 ? -q : q;
      for (std::int64_t j = 1; j <= qa + 1; ++j) {
        if (!down && detail::coprime_zq(m - j, q)) down = m - j;
        if (!up && detail::coprime_zq(m + j, q)) up = m + j;
        if (down && up) break;
      }
      if (!down || !up) return;  // q = 0 never happens; defensive
      int cmp = scan.cmp_dists(*down, *up);
      if (cmp == 0) {
        out.omitted.push_back(q);
        return;
      }
      m = cmp < 0 ? *down : *up;
    }
    SolutionRecord rec;
    rec.q = q;
    rec.p = -m;
    rec.error = scan.dist_ball(m);
    rec.coprime = detail::coprime_zq(m, q);
    rec.bound_case = BoundCase::Oracle;
    rec.source = "bruteforce";
    out.rows.push_back(std::move(rec));
  });
  return out;
}

// Every (p, q) with |q| <= Q and certified |q xi + p - y| <= bound(|q|)
// (optionally restricted to coprime pairs).  Pairs whose comparison is
// undecided at this precision are reported separately.
struct PsiSolutionsResult {
  std::vector<SolutionRecord> rows;
  std::vector<SolutionRecord> undecided;
};

inline PsiSolutionsResult solutions_within(const TargetProblem& prob, std::int64_t Q,
                                           const std::function<mpq_class(std::int64_t)>& bound,
                                           bool coprime_only, SignFilter sign) {
  if (Q < 1) throw std::invalid_argument("solutions_within: Q must be >= 1");
  PsiSolutionsResult out;
  LinearFormScan scan(prob, Q);
  detail::for_each_signed_q(Q, sign, [&](std::int64_t q) {
    const mpq_class w = bound(q < 0 ? -q : q);
    if (w <= 0) return;
    scan.eval(q);
    auto [mlo, mhi] = scan.window(w);
    for (mpz_class m = mlo; m <= mhi; ++m) {
      if (coprime_only && !detail::coprime_zq(m, q)) continue;
      int cmp = scan.cmp_dist_bound(m, w);
      if (cmp > 0) continue;
      SolutionRecord rec;
      rec.q = q;
      rec.p = -m;
      rec.error = scan.dist_ball(m);
      rec.coprime = detail::coprime_zq(m, q);
      rec.bound_case = BoundCase::Oracle;
      rec.source = "bruteforce";
      if (cmp < 0) {
        out.rows.push_back(std::move(rec));
      } else {
        out.undecided.push_back(std::move(rec));
      }
    }
  });
  return out;
}

// The coefficient 2*sqrt(3) * max(1, |xi|)^{1/2} * |y|^{1/2}.
inline RealBall sqrt_bound_coefficient(const TargetProblem& prob, mpfr_prec_t prec = 256) {
  RealBall xi_abs = abs_ball(prob.xi.eval(prec));
  RealBall y_abs = abs_ball(prob.y.eval(prec));
  RealBall one = RealBall::from_si(1, prec);
  RealBall m = max_ball(one, xi_abs);
  RealBall two_sqrt3 = mul_si(sqrt_ball(RealBall::from_si(3, prec)), 2);
  return two_sqrt3 * sqrt_ball(m) * sqrt_ball(y_abs);
}

// Counts coprime pairs (p, q), |q| <= Q, with certified
// |q xi + p - y| <= c / sqrt(|q|), checkpointed at the given thresholds
// (ascending).  For y = 0 the census is delegated to the convergents, which
// witness the bound on their own.
struct SqrtBoundCensus {
  RealBall coefficient;
  std::vector<std::int64_t> thresholds;
  std::vector<std::int64_t> counts;      // certified hits per threshold
  std::vector<std::int64_t> undecided;   // boundary cases per threshold
  std::vector<SolutionRecord> rows;   // the certified hits (bounded count)
  bool delegated_to_convergents = false;
};

inline SqrtBoundCensus sqrt_bound_census(const TargetProblem& prob,
                                         std::vector<std::int64_t> thresholds,
                                         size_t max_rows_kept = 100000) {
  if (thresholds.empty()) throw std::invalid_argument("sqrt_bound_census: need thresholds");
  SqrtBoundCensus out;
  out.thresholds = thresholds;
  out.counts.assign(thresholds.size(), 0);
  out.undecided.assign(thresholds.size(), 0);
  const std::int64_t Q = thresholds.back();

  if (prob.y.is_rational() && !prob.y.is_decimal_literal() && prob.y.exact_rational() == 0) {
    // homogeneous case: the convergents themselves are the witnesses
    out.delegated_to_convergents = true;
    out.coefficient = RealBall::from_si(0, 64);
    CFExpansion cf = expand(prob.xi, 2, PrecisionPolicy{});
    long k_max = 2;
    while (!cf.terminated && !cf.truncated && cf.q.back() <= Q) {
      k_max += 8;
      cf = expand(prob.xi, k_max, PrecisionPolicy{});
    }
    for (long k = 0; k <= cf.depth(); ++k) {
      if (cf.q[k] > Q) break;
      for (size_t i = 0; i < thresholds.size(); ++i) {
        if (cf.q[k] <= thresholds[i]) ++out.counts[i];
      }
      SolutionRecord rec;
      rec.q = cf.q[k];
      rec.p = -cf.p[k];
      rec.error = abs_ball(convergent_residual(cf, k));
      rec.coprime = true;
      rec.source = "convergent";
      out.rows.push_back(std::move(rec));
    }
    return out;
  }

  const mpfr_prec_t cprec = 256;
  out.coefficient = sqrt_bound_coefficient(prob, cprec);
  LinearFormScan scan(prob, Q);

  mpfr_t wlo, whi, dlo, dhi;
  mpfr_init2(wlo, cprec);
  mpfr_init2(whi, cprec);
  mpfr_init2(dlo, cprec);
  mpfr_init2(dhi, cprec);

  detail::for_each_signed_q(Q, SignFilter::Both, [&](std::int64_t q) {
    const std::int64_t qa = q < 0 ? -q : q;
    // threshold ball c/sqrt(|q|)
    RealBall w = out.coefficient / sqrt_ball(RealBall::from_si(qa, cprec));
    w.lower_bound(wlo);
    w.upper_bound(whi);
    // rational over-window >= whi (double rounded up converts exactly)
    const mpq_class wq_hi(mpfr_get_d(whi, MPFR_RNDU));
    scan.eval(q);
    auto [mlo, mhi] = scan.window(wq_hi);
    for (mpz_class m = mlo; m <= mhi; ++m) {
      if (!detail::coprime_zq(m, q)) continue;
      scan.dist_bounds(m, dlo, dhi);
      if (mpfr_cmp(dhi, wlo) <= 0) {
        for (size_t i = 0; i < thresholds.size(); ++i) {
          if (qa <= thresholds[i]) ++out.counts[i];
        }
        if (out.rows.size() < max_rows_kept) {
          SolutionRecord rec;
          rec.q = q;
          rec.p = -m;
          rec.error = scan.dist_ball(m);
          rec.coprime = true;
          rec.source = "bruteforce";
          out.rows.push_back(std::move(rec));
        }
      } else if (mpfr_cmp(dlo, whi) <= 0) {
        for (size_t i = 0; i < thresholds.size(); ++i) {
          if (qa <= thresholds[i]) ++out.undecided[i];
        }
      }
    }
  });
  mpfr_clear(wlo);
  mpfr_clear(whi);
  mpfr_clear(dlo);
  mpfr_clear(dhi);
  return out;
}

// Counts integer solutions (not necessarily coprime) of the quarter-height
// bound |q xi + p - y| <= 1/(4|q|) with |q| <= Q.
struct MinkowskiCount {
  std::int64_t count = 0;
  std::int64_t undecided = 0;
};

inline MinkowskiCount minkowski_bound_count(const TargetProblem& prob, std::int64_t Q) {
  MinkowskiCount out;
  if (Q < 1) return out;
  LinearFormScan scan(prob, Q);
  detail::for_each_signed_q(Q, SignFilter::Both, [&](std::int64_t q) {
    const std::int64_t qa = q < 0 ? -q : q;
    scan.eval(q);
    int cmp = scan.cmp_dist_bound(scan.nearest_m(), mpq_class(mpz_class(1), mpz_class(4 * qa)));
    if (cmp < 0) {
      ++out.count;
    } else if (cmp == 0) {
      ++out.undecided;
    }
  });
  return out;
}

// Effective exponent -log(error)/log(q) over best solutions.  A height q is
// a record when its error beats every smaller height (a strictly new
// closest approach); new records keep arriving for any irrational xi, so
// the tail is never starved.  The estimate is the largest exponent among
// records with q >= sqrt(Q).
struct ExponentRecord {
  std::int64_t q = 0;
  RealBall error;
  double effective_exponent = 0;
  bool is_record = false;
};

struct EmpiricalExponent {
  std::vector<ExponentRecord> records;
  double limsup_estimate = std::numeric_limits<double>::quiet_NaN();
  bool tail_has_record = false;
  std::int64_t exact_hits = 0;  // q whose error enclosure touches zero, excluded
};

inline EmpiricalExponent empirical_exponent(const TargetProblem& prob, std::int64_t Q,
                                            bool coprime_only = false) {
  if (Q < 4) throw std::invalid_argument("empirical_exponent: Q must be >= 4");
  EmpiricalExponent out;
  BestSolutionsResult best = best_solutions(prob, Q, coprime_only, SignFilter::Positive);
  double best_err = std::numeric_limits<double>::infinity();
  const double tail_from = std::sqrt(static_cast<double>(Q));
  for (const auto& row : best.rows) {
    const std::int64_t q = row.q.get_si();
    if (q < 2) continue;
    if (!row.error.is_positive_certified()) {
      ++out.exact_hits;
      continue;
    }
    const double err = row.error.center_double();
    if (err < best_err) {
      best_err = err;
      const double e = -std::log(err) / std::log(static_cast<double>(q));
      ExponentRecord rec;
      rec.q = q;
      rec.error = row.error;
      rec.effective_exponent = e;
      rec.is_record = true;
      out.records.push_back(std::move(rec));
      if (static_cast<double>(q) >= tail_from && (!out.tail_has_record || e > out.limsup_estimate)) {
        out.tail_has_record = true;
        out.limsup_estimate = e;
      }
    }
  }
  return out;
}

}  // namespace inhomog
