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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "inhomog/parallel.hpp"
#include "inhomog/real_ball.hpp"
#include "inhomog/symbolic.hpp"
#include "inhomog/transference.hpp"
#include "inhomog/unimodular.hpp"

namespace inhomog {

struct Point {
  SymValue x1, x2;

  static Point parse(const std::string& spec) {
    auto comma = spec.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("point: expected 'expr,expr'");
    Point p;
    p.x1 = SymValue::parse(spec.substr(0, comma));
    p.x2 = SymValue::parse(spec.substr(comma + 1));
    return p;
  }

  bool is_zero() const {
    return p_is_zero(x1) && p_is_zero(x2);
  }

  // slope x1/x2 certified irrational (dense-orbit hypothesis); a decimal
  // literal in either coordinate counts as assumed irrational
  bool irrational_slope() const {
    if (x1.is_decimal_literal() || x2.is_decimal_literal()) return true;
    if (p_is_zero(x2)) return false;
    SymValue s = x1 / x2;
    return s.certified_irrational();
  }

 private:
  static bool p_is_zero(const SymValue& v) {
    return v.is_rational() && v.exact_rational() == 0 && !v.is_decimal_literal();
  }
};

// Sup-norm annulus a_inner <= |z| <= b_outer with exact rational bounds.
struct Annulus {
  mpq_class inner, outer;

  Annulus(mpq_class a, mpq_class b) : inner(std::move(a)), outer(std::move(b)) {
    if (!(inner > 0 && inner < outer))
      throw std::invalid_argument("annulus: need 0 < inner < outer");
  }
};

namespace detail {

// Extended gcd on int64: returns g = gcd(|a|,|b|) and x, y with a x + b y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  std::int64_t x1, y1;
  std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline std::int64_t floor_div(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t n, std::int64_t d) {
  return -floor_div(-n, d);
}

// Intersects |base + t*step| <= bound with [t_lo, t_hi].  A zero step keeps
// the range when |base| <= bound and empties it otherwise.
inline bool clamp_range(std::int64_t base, std::int64_t step, std::int64_t bound,
                        std::int64_t& t_lo, std::int64_t& t_hi) {
  if (step == 0) {
    if (base < -bound || base > bound) t_hi = t_lo - 1;
    return t_lo <= t_hi;
  }
  // -bound <= base + t*step <= bound
  std::int64_t lo, hi;
  if (step > 0) {
    lo = ceil_div(-bound - base, step);
    hi = floor_div(bound - base, step);
  } else {
    lo = ceil_div(bound - base, step);
    hi = floor_div(-bound - base, step);
  }
  t_lo = std::max(t_lo, lo);
  t_hi = std::min(t_hi, hi);
  return t_lo <= t_hi;
}

// Walks one residue family: first column (a, c) fixed, (b, d) moving along
// (b0 + t a, d0 + t c) with the sup-norm box |.| <= T.
template <typename Fn>
void emit_family(std::int64_t a, std::int64_t c, std::int64_t b0, std::int64_t d0,
                 std::int64_t T, Fn&& fn) {
  std::int64_t t_lo = std::numeric_limits<std::int64_t>::min() / 4;
  std::int64_t t_hi = std::numeric_limits<std::int64_t>::max() / 4;
  if (!clamp_range(b0, a, T, t_lo, t_hi)) return;
  if (!clamp_range(d0, c, T, t_lo, t_hi)) return;
  for (std::int64_t t = t_lo; t <= t_hi; ++t) {
    fn(UnimodMatrix{a, b0 + t * a, c, d0 + t * c});
  }
}

// Visits every coprime pair (a, c) with a, c >= 1 and max(a, c) <= limit via
// the Stern-Brocot mediant tree.  The left neighbor supplies Bezout data
// without any gcd: with a*cL - c*aL = -1, the base (b0, d0) = (-aL, -cL)
// satisfies a*d0 - b0*c = 1.
template <typename Fn>
void visit_coprime_columns(std::int64_t limit, Fn&& fn) {
  struct Node {
    std::int64_t aL, cL, aR, cR;
  };
  std::vector<Node> stack;
  stack.push_back({1, 0, 0, 1});
  while (!stack.empty()) {
    Node n = stack.back();
    stack.pop_back();
    const std::int64_t a = n.aL + n.aR;
    const std::int64_t c = n.cL + n.cR;
    if (a > limit || c > limit) continue;
    fn(a, c, -n.aL, -n.cL);
    stack.push_back({n.aL, n.cL, a, c});
    stack.push_back({a, c, n.aR, n.cR});
  }
}

}  // namespace detail

// Streams every matrix of determinant 1 with norm <= T exactly once, in
// residue-family order (fast, unordered).  For canonical norm-then-lex order
// use enumerate_ball below.
template <typename Fn>
void for_each_sl2(std::int64_t T, Fn&& fn) {
  if (T < 1) return;
  for (std::int64_t t = -T; t <= T; ++t) {
    fn(UnimodMatrix{1, t, 0, 1});
    fn(UnimodMatrix{-1, t, 0, -1});
    fn(UnimodMatrix{0, -1, 1, t});
    fn(UnimodMatrix{0, 1, -1, t});
  }
  detail::visit_coprime_columns(T, [&](std::int64_t a, std::int64_t c, std::int64_t b0, std::int64_t d0) {
    detail::emit_family(a, c, b0, d0, T, fn);
    detail::emit_family(a, -c, -b0, d0, T, fn);
    detail::emit_family(-a, c, b0, -d0, T, fn);
    detail::emit_family(-a, -c, -b0, -d0, T, fn);
  });
}

// Canonical stream: shells of constant norm n = 1..T, each shell sorted
// lexicographically by (a, b, c, d).  Implemented independently of
// for_each_sl2: per shell, columns on the boundary of the box contribute
// directly, and boundary rows are completed through the transposed family.
template <typename Fn>
void enumerate_ball(std::int64_t T, Fn&& fn) {
  if (T < 1) return;
  std::vector<UnimodMatrix> shell;
  for (std::int64_t n = 1; n <= T; ++n) {
    shell.clear();
    auto take_if_norm = [&](const UnimodMatrix& m, std::int64_t want) {
      if (m.norm() == want) shell.push_back(m);
    };
    // columns (a, c) with max(|a|, |c|) = n
    auto column = [&](std::int64_t a, std::int64_t c) {
      std::int64_t x, y;
      if (detail::ext_gcd(a, c, x, y) != 1) return;
      // a*d0 - b0*c = 1 with d0 = x... solve a*x + c*y = 1 => d0 = x, b0 = -y
      detail::emit_family(a, c, -y, x, n, [&](const UnimodMatrix& m) { take_if_norm(m, n); });
    };
    for (std::int64_t c = -n; c <= n; ++c) {
      column(n, c);
      column(-n, c);
    }
    for (std::int64_t a = -(n - 1); a <= n - 1; ++a) {
      column(a, n);
      column(a, -n);
    }
    // rows (b, d) with max(|b|, |d|) = n and max(|a|, |c|) < n:
    // for fixed (b, d), solutions of a d - b c = 1 are (a0 + t b, c0 + t d)
    auto row_family = [&](std::int64_t b, std::int64_t d) {
      std::int64_t x, y;
      if (detail::ext_gcd(d, b, x, y) != 1) return;
      // a*d - b*c = 1 along (a, c) = (x + t b, -y + t d), kept strictly
      // inside the box so column families are not double counted
      std::int64_t t_lo = std::numeric_limits<std::int64_t>::min() / 4;
      std::int64_t t_hi = std::numeric_limits<std::int64_t>::max() / 4;
      if (!detail::clamp_range(x, b, n - 1, t_lo, t_hi)) return;
      if (!detail::clamp_range(-y, d, n - 1, t_lo, t_hi)) return;
      for (std::int64_t t = t_lo; t <= t_hi; ++t) {
        UnimodMatrix m{x + t * b, b, -y + t * d, d};
        take_if_norm(m, n);
      }
    };
    for (std::int64_t d = -n; d <= n; ++d) {
      row_family(n, d);
      row_family(-n, d);
    }
    for (std::int64_t b = -(n - 1); b <= n - 1; ++b) {
      row_family(b, n);
      row_family(b, -n);
    }
    std::sort(shell.begin(), shell.end());
    for (const auto& m : shell) fn(m);
  }
}

// gamma * x for symbolic points, as certified balls at the given precision.
struct ImagePoint {
  RealBall u, v;
};

inline ImagePoint apply_matrix(const UnimodMatrix& g, const RealBall& x1, const RealBall& x2) {
  ImagePoint out{mul_si(x1, g.a) + mul_si(x2, g.b), mul_si(x1, g.c) + mul_si(x2, g.d)};
  return out;
}

struct HitRecord {
  UnimodMatrix gamma;
  RealBall image_u, image_v;
  RealBall distance;  // sup-norm distance |gamma x - y|
  std::int64_t norm = 0;
};

// All gamma with norm <= T and certified |gamma x - y| <= norm^{-mu};
// comparisons still open at the precision cap are reported separately.
// A fast double pass with a rigorous error margin prefilters candidates;
// only near-threshold matrices pay for ball arithmetic.
struct OrbitHits {
  std::vector<HitRecord> hits;
  std::vector<HitRecord> undecided;
};

namespace detail {

struct DoublePoint {
  double x1, x2, err;  // |computed - exact| <= err per coordinate
};

inline DoublePoint to_double_point(const SymValue& a, const SymValue& b, mpfr_prec_t prec = 128) {
  RealBall b1 = a.eval(prec), b2 = b.eval(prec);
  DoublePoint p{b1.center_double(), b2.center_double(), 0.0};
  p.err = std::max(std::abs(p.x1), std::abs(p.x2)) * 0x1.0p-50 + b1.radius_double() +
          b2.radius_double();
  return p;
}

}  // namespace detail

inline OrbitHits orbit_hits(const Point& x, const Point& y, std::int64_t T, const mpq_class& mu) {
  if (x.is_zero()) throw std::invalid_argument("orbit_hits: x must be nonzero");
  OrbitHits out;
  const mpfr_prec_t prec = 192;
  RealBall x1 = x.x1.eval(prec), x2 = x.x2.eval(prec);
  RealBall y1 = y.x1.eval(prec), y2 = y.x2.eval(prec);
  const detail::DoublePoint xd = detail::to_double_point(x.x1, x.x2);
  const detail::DoublePoint yd = detail::to_double_point(y.x1, y.x2);
  const double mu_d = mpq_class(mu).get_d();
  // double-path error for gamma*x with |entries| <= T
  const double margin = 4.0 * static_cast<double>(T) * (xd.err + 0x1.0p-50) + 1e-12;

  std::vector<UnimodMatrix> candidates;
  const double thr_max =
      mu_d >= 0 ? 1.0 : std::pow(static_cast<double>(T), -mu_d);
  const double reach = thr_max + margin + yd.err + 1e-9;
  for_each_sl2(T, [&](const UnimodMatrix& g) {
    const double u = static_cast<double>(g.a) * xd.x1 + static_cast<double>(g.b) * xd.x2;
    if (std::abs(u - yd.x1) > reach) return;
    const double v = static_cast<double>(g.c) * xd.x1 + static_cast<double>(g.d) * xd.x2;
    const double dist = std::max(std::abs(u - yd.x1), std::abs(v - yd.x2));
    const double thr = std::pow(static_cast<double>(g.norm()), -mu_d);
    if (dist <= thr + margin + yd.err) candidates.push_back(g);
  });
  std::sort(candidates.begin(), candidates.end(), [](const UnimodMatrix& l, const UnimodMatrix& r) {
    if (l.norm() != r.norm()) return l.norm() < r.norm();
    return l < r;
  });

  for (const auto& g : candidates) {
    ImagePoint img = apply_matrix(g, x1, x2);
    RealBall dist = max_ball(abs_ball(img.u - y1), abs_ball(img.v - y2));
    // norm^{-mu} = exp(-mu ln n)
    RealBall ln_n = log_ball(RealBall::from_si(g.norm(), prec));
    RealBall expo = RealBall::from_q(-mu, prec) * ln_n;
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    expo.lower_bound(lo);
    expo.upper_bound(hi);
    mpfr_exp(lo, lo, MPFR_RNDD);
    mpfr_exp(hi, hi, MPFR_RNDU);
    RealBall thr = RealBall::from_endpoints(lo, hi, prec);
    mpfr_clear(lo);
    mpfr_clear(hi);

    HitRecord rec{g, img.u, img.v, dist, g.norm()};
    Cmp c = compare_certified(dist, thr);
    if (c == Cmp::Less) {
      out.hits.push_back(std::move(rec));
    } else if (c == Cmp::Undecided) {
      // exact equality (e.g. distance 0 at y = gamma x) counts as a hit when
      // the distance enclosure lies at or below the threshold enclosure
      if (certified_le_q(dist, mpq_class(0))) {
        out.hits.push_back(std::move(rec));
      } else {
        out.undecided.push_back(std::move(rec));
      }
    }
  }
  return out;
}

// Realizes the sqrt-bound coprime pairs through the lattice orbit: with
// x = (xi, 1) and the diagonal target (y, y), each gamma with certified
// |gamma x - (y,y)| <= c |gamma|^{-1/2} contributes its two rows
// (q_i, p_i) as coprime solutions of |q xi + p - y| <= c/sqrt(|q|), and the
// rows satisfy q_1 p_2 - q_2 p_1 = 1 exactly.
struct OrbitPair {
  UnimodMatrix gamma;
  SolutionRecord first, second;
};

struct OrbitPairsResult {
  RealBall coefficient;
  std::vector<OrbitPair> pairs;
  long long undecided = 0;
};

inline OrbitPairsResult orbit_coprime_pairs(const TargetProblem& prob, std::int64_t T) {
  if (prob.y.is_rational() && !prob.y.is_decimal_literal() && prob.y.exact_rational() == 0)
    throw std::invalid_argument("orbit_coprime_pairs: y must be nonzero");
  OrbitPairsResult out;
  const mpfr_prec_t prec = 256;
  RealBall xi = prob.xi.eval(prec);
  RealBall yv = prob.y.eval(prec);
  RealBall one = RealBall::from_si(1, prec);
  RealBall xsup = max_ball(abs_ball(xi), one);
  out.coefficient =
      mul_si(sqrt_ball(RealBall::from_si(3, prec)), 2) * sqrt_ball(xsup) * sqrt_ball(abs_ball(yv));

  const double xi_d = xi.center_double();
  const double y_d = yv.center_double();
  const double c_d = out.coefficient.center_double();
  const double margin = 4.0 * static_cast<double>(T) * 0x1.0p-48 + 1e-12;

  std::vector<UnimodMatrix> candidates;
  const double reach = c_d + margin + 1e-6;  // threshold at norm 1 bounds all others
  for_each_sl2(T, [&](const UnimodMatrix& g) {
    const double u = static_cast<double>(g.a) * xi_d + static_cast<double>(g.b);
    if (std::abs(u - y_d) > reach) return;
    const double v = static_cast<double>(g.c) * xi_d + static_cast<double>(g.d);
    if (std::abs(v - y_d) > reach) return;
    const double dist = std::max(std::abs(u - y_d), std::abs(v - y_d));
    const double thr = c_d / std::sqrt(static_cast<double>(g.norm()));
    if (dist <= thr + margin + 1e-9) candidates.push_back(g);
  });
  std::sort(candidates.begin(), candidates.end(), [](const UnimodMatrix& l, const UnimodMatrix& r) {
    if (l.norm() != r.norm()) return l.norm() < r.norm();
    return l < r;
  });

  for (const auto& g : candidates) {
    RealBall u = add_z(mul_si(xi, g.a), mpz_class(g.b));
    RealBall v = add_z(mul_si(xi, g.c), mpz_class(g.d));
    RealBall dist = max_ball(abs_ball(u - yv), abs_ball(v - yv));
    RealBall thr = out.coefficient / sqrt_ball(RealBall::from_si(g.norm(), prec));
    Cmp c = compare_certified(dist, thr);
    if (c == Cmp::Undecided) {
      ++out.undecided;
      continue;
    }
    if (c != Cmp::Less) continue;
    OrbitPair pair;
    pair.gamma = g;
    auto make_row = [&](std::int64_t q_i, std::int64_t p_i) {
      SolutionRecord rec;
      rec.q = q_i;
      rec.p = p_i;
      rec.error = eval_linear_form(rec.p, rec.q, prob, prec);
      mpz_class gg;
      mpz_gcd(gg.get_mpz_t(), rec.p.get_mpz_t(), rec.q.get_mpz_t());
      rec.coprime = (gg == 1);
      rec.bound_case = BoundCase::Orbit;
      rec.source = "orbit";
      return rec;
    };
    // gamma = (q1 p1; q2 p2) acting on (xi, 1)
    pair.first = make_row(g.a, g.b);
    pair.second = make_row(g.c, g.d);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

// M(T) = #{gamma : norm <= T, gamma x in the annulus}, with certified
// membership; enclosures that straddle a boundary go to a separate bucket.
struct AnnulusCounts {
  std::vector<std::int64_t> T_values;
  std::vector<long long> counts;
  std::vector<long long> boundary_undecided;
};

inline AnnulusCounts count_in_annulus(const Point& x, const Annulus& omega,
                                      std::vector<std::int64_t> T_list, int threads = 1) {
  if (!x.irrational_slope())
    throw std::invalid_argument("count_in_annulus: x must have irrational slope");
  std::sort(T_list.begin(), T_list.end());
  AnnulusCounts out;
  out.T_values = T_list;
  out.counts.assign(T_list.size(), 0);
  out.boundary_undecided.assign(T_list.size(), 0);
  const std::int64_t T = T_list.back();

  const mpfr_prec_t prec = 160;
  RealBall x1 = x.x1.eval(prec), x2 = x.x2.eval(prec);
  const detail::DoublePoint xd = detail::to_double_point(x.x1, x.x2);
  const double margin = 4.0 * static_cast<double>(T) * (xd.err + 0x1.0p-50) + 1e-12;
  const double in_lo = omega.inner.get_d();
  const double in_hi = omega.outer.get_d();

  struct Tally {
    std::vector<long long> in, und;
  };
  const int nthreads = std::max(1, threads);
  std::vector<Tally> tallies(nthreads);
  for (auto& t : tallies) {
    t.in.assign(T_list.size(), 0);
    t.und.assign(T_list.size(), 0);
  }

  // split the coprime-column tree work by a cheap deterministic hash of the
  // family head; every worker walks the tree but only evaluates its share
  auto run_worker = [&](int wi) {
    Tally& tally = tallies[wi];
    auto consider = [&](const UnimodMatrix& g) {
      const double u = static_cast<double>(g.a) * xd.x1 + static_cast<double>(g.b) * xd.x2;
      const double v = static_cast<double>(g.c) * xd.x1 + static_cast<double>(g.d) * xd.x2;
      const double m = std::max(std::abs(u), std::abs(v));
      int verdict;  // 1 in, 0 out, -1 escalate
      if (m > in_lo + margin && m < in_hi - margin) {
        verdict = 1;
      } else if (m < in_lo - margin || m > in_hi + margin) {
        verdict = 0;
      } else {
        verdict = -1;
      }
      bool in = false, und = false;
      if (verdict == 1) {
        in = true;
      } else if (verdict == -1) {
        ImagePoint img = apply_matrix(g, x1, x2);
        RealBall sup = max_ball(abs_ball(img.u), abs_ball(img.v));
        if (certified_ge_q(sup, omega.inner) && certified_le_q(sup, omega.outer)) {
          in = true;
        } else if (certified_lt_q(sup, omega.inner) || certified_gt_q(sup, omega.outer)) {
          in = false;
        } else {
          und = true;  // enclosure straddles a boundary of the annulus
        }
      }
      if (in || und) {
        const std::int64_t n = g.norm();
        for (size_t i = 0; i < T_list.size(); ++i) {
          if (n <= T_list[i]) {
            if (in) ++tally.in[i];
            else ++tally.und[i];
          }
        }
      }
    };
    if (wi == 0) {
      for (std::int64_t t = -T; t <= T; ++t) {
        consider(UnimodMatrix{1, t, 0, 1});
        consider(UnimodMatrix{-1, t, 0, -1});
        consider(UnimodMatrix{0, -1, 1, t});
        consider(UnimodMatrix{0, 1, -1, t});
      }
    }
    detail::visit_coprime_columns(T, [&](std::int64_t a, std::int64_t c, std::int64_t b0, std::int64_t d0) {
      if (((a * 0x9e3779b9u + c) % static_cast<std::uint64_t>(nthreads)) != static_cast<std::uint64_t>(wi))
        return;
      detail::emit_family(a, c, b0, d0, T, consider);
      detail::emit_family(a, -c, -b0, d0, T, consider);
      detail::emit_family(-a, c, b0, -d0, T, consider);
      detail::emit_family(-a, -c, -b0, -d0, T, consider);
    });
  };

  if (nthreads == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(run_worker, i);
    for (auto& th : pool) th.join();
  }
  for (const auto& t : tallies) {
    for (size_t i = 0; i < T_list.size(); ++i) {
      out.counts[i] += t.in[i];
      out.boundary_undecided[i] += t.und[i];
    }
  }
  return out;
}

// Density-exponent estimation for a batch of targets sharing one x.
// A matrix is a record when its image comes strictly closer to the target
// than every earlier matrix in (norm, lex) order; a dense orbit produces
// records at all scales.  Each record from norm >= 2 carries the exponent
// e(gamma) = -log|gamma x - y| / log|gamma|.
//
// mu_hat is computed from the records of the tail norm >= sqrt(T), tracked
// fresh from the cutoff so approaches achieved below it do not leak in.  A
// tail record (n_r, d_r) stands until the next record at n_{r+1} (or until
// the budget T), certifying solvability of dist <= n^{-mu} up to
// mu_r = -log d_r / log n_{r+1}; mu_hat is the largest such sustained
// exponent.  Scoring each record against its own norm instead would let a
// lucky early approach divide by a small log and systematically overstate
// the exponent.  Plain doubles: this is an estimator, not a certificate;
// exact double hits are split out.
struct ExponentTargetResult {
  double y1 = 0, y2 = 0;
  struct Rec {
    std::int64_t norm;
    UnimodMatrix gamma;
    double dist;
    double exponent;
  };
  std::vector<Rec> records;
  double mu_hat = std::numeric_limits<double>::quiet_NaN();
  bool mu_hat_defined = false;
  long long exact_hits = 0;
};

inline std::vector<ExponentTargetResult> density_exponent_batch(
    const Point& x, const std::vector<std::pair<double, double>>& targets, std::int64_t T,
    int threads = 1) {
  if (!x.irrational_slope())
    throw std::invalid_argument("density_exponent: x must have irrational slope");
  const detail::DoublePoint xd = detail::to_double_point(x.x1, x.x2);
  const std::int64_t tail_from =
      static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(T))));
  // phase A must reach the tail cutoff so the restarted tracking begins in
  // canonical order
  const std::int64_t n0 = std::min<std::int64_t>(T, std::max<std::int64_t>(200, tail_from));

  std::vector<ExponentTargetResult> out(targets.size());
  for (size_t i = 0; i < targets.size(); ++i) {
    out[i].y1 = targets[i].first;
    out[i].y2 = targets[i].second;
  }
  std::vector<double> best_dist(targets.size(), std::numeric_limits<double>::infinity());
  std::vector<double> tail_best(targets.size(), std::numeric_limits<double>::infinity());
  struct TailRec {
    std::int64_t norm;
    double dist;
  };
  std::vector<std::vector<TailRec>> tail_recs(targets.size());

  auto score = [&](size_t i, const UnimodMatrix& g, double dist) {
    if (dist == 0.0) {
      ++out[i].exact_hits;
      return;
    }
    if (dist < best_dist[i]) {
      best_dist[i] = dist;
      if (g.norm() >= 2) {  // log 1 = 0: no exponent at norm 1
        const double e = -std::log(dist) / std::log(static_cast<double>(g.norm()));
        out[i].records.push_back({g.norm(), g, dist, e});
      }
    }
    if (g.norm() >= tail_from && dist < tail_best[i]) {
      tail_best[i] = dist;
      tail_recs[i].push_back({g.norm(), dist});
    }
  };

  // phase A: canonical order up to n0, exact record tracking
  enumerate_ball(n0, [&](const UnimodMatrix& g) {
    const double u = static_cast<double>(g.a) * xd.x1 + static_cast<double>(g.b) * xd.x2;
    const double v = static_cast<double>(g.c) * xd.x1 + static_cast<double>(g.d) * xd.x2;
    for (size_t i = 0; i < targets.size(); ++i) {
      const double dist = std::max(std::abs(u - out[i].y1), std::abs(v - out[i].y2));
      score(i, g, dist);
    }
  });

  if (T > n0) {
    // phase B: stream the rest unordered, collect per-target candidates that
    // beat the phase-A closest approach, then replay them in canonical order
    struct Cand {
      std::int64_t norm;
      UnimodMatrix g;
      double dist;
    };
    const int nthreads = std::max(1, threads);
    std::vector<std::vector<std::vector<Cand>>> cands(nthreads);
    for (auto& c : cands) c.resize(targets.size());

    // images can only matter inside a box around the targets; everything
    // else (the vast majority of the orbit) is rejected on two compares
    double reach = 0;
    for (double d : tail_best) {
      if (std::isfinite(d)) reach = std::max(reach, d);
    }
    if (reach == 0) reach = 1.0;
    double bx_lo = std::numeric_limits<double>::infinity(), bx_hi = -bx_lo;
    double by_lo = bx_lo, by_hi = -bx_lo;
    for (const auto& t : targets) {
      bx_lo = std::min(bx_lo, t.first);
      bx_hi = std::max(bx_hi, t.first);
      by_lo = std::min(by_lo, t.second);
      by_hi = std::max(by_hi, t.second);
    }
    bx_lo -= reach;
    bx_hi += reach;
    by_lo -= reach;
    by_hi += reach;

    auto worker = [&](int wi) {
      auto consider = [&](const UnimodMatrix& g) {
        const double u = static_cast<double>(g.a) * xd.x1 + static_cast<double>(g.b) * xd.x2;
        if (u < bx_lo || u > bx_hi) return;
        const double v = static_cast<double>(g.c) * xd.x1 + static_cast<double>(g.d) * xd.x2;
        if (v < by_lo || v > by_hi) return;
        const std::int64_t n = g.norm();
        if (n <= n0) return;
        for (size_t i = 0; i < targets.size(); ++i) {
          const double dist = std::max(std::abs(u - out[i].y1), std::abs(v - out[i].y2));
          // tail_best >= best_dist, so this prune keeps both record kinds
          if (dist < tail_best[i]) cands[wi][i].push_back({n, g, dist});
        }
      };
      if (wi == 0) {
        for (std::int64_t t = -T; t <= T; ++t) {
          consider(UnimodMatrix{1, t, 0, 1});
          consider(UnimodMatrix{-1, t, 0, -1});
          consider(UnimodMatrix{0, -1, 1, t});
          consider(UnimodMatrix{0, 1, -1, t});
        }
      }
      detail::visit_coprime_columns(T, [&](std::int64_t a, std::int64_t c, std::int64_t b0, std::int64_t d0) {
        if (((a * 0x9e3779b9u + c) % static_cast<std::uint64_t>(nthreads)) != static_cast<std::uint64_t>(wi))
          return;
        detail::emit_family(a, c, b0, d0, T, consider);
        detail::emit_family(a, -c, -b0, d0, T, consider);
        detail::emit_family(-a, c, b0, -d0, T, consider);
        detail::emit_family(-a, -c, -b0, -d0, T, consider);
      });
    };
    if (nthreads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker, i);
      for (auto& th : pool) th.join();
    }

    for (size_t i = 0; i < targets.size(); ++i) {
      std::vector<Cand> all;
      for (int w = 0; w < nthreads; ++w) {
        all.insert(all.end(), cands[w][i].begin(), cands[w][i].end());
      }
      std::sort(all.begin(), all.end(), [](const Cand& l, const Cand& r) {
        if (l.norm != r.norm) return l.norm < r.norm;
        return l.g < r.g;
      });
      for (const auto& c : all) {
        score(i, c.g, c.dist);
      }
    }
  }

  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& recs = tail_recs[i];
    for (size_t r = 0; r < recs.size(); ++r) {
      const double n_stand = (r + 1 < recs.size()) ? static_cast<double>(recs[r + 1].norm)
                                                   : static_cast<double>(T);
      if (n_stand < 2) continue;
      const double mu = -std::log(recs[r].dist) / std::log(n_stand);
      if (!out[i].mu_hat_defined || mu > out[i].mu_hat) {
        out[i].mu_hat = mu;
        out[i].mu_hat_defined = true;
      }
    }
  }
  return out;
}

inline ExponentTargetResult density_exponent_estimate(const Point& x, double y1, double y2,
                                                      std::int64_t T, int threads = 1) {
  return density_exponent_batch(x, {{y1, y2}}, T, threads)[0];
}

}  // namespace inhomog
