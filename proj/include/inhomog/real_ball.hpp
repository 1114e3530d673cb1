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

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace inhomog {

// Raised when a certified decision cannot be reached at the configured
// precision cap.
class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Outcome of a certified comparison.  Undecided means the balls overlap;
// equal exact values are Undecided as well, since a strict inequality can
// never be certified for them.
enum class Cmp { Less, Greater, Undecided };

struct PrecisionPolicy {
  mpfr_prec_t start_bits = 128;
  mpfr_prec_t max_bits = 8192;

  bool can_escalate(mpfr_prec_t p) const { return p < max_bits; }
  mpfr_prec_t next(mpfr_prec_t p) const { return std::min<mpfr_prec_t>(max_bits, p * 2); }
};

// A real number represented as center +- radius.  The center carries the
// working precision; the radius is a short nonnegative float and every
// radius operation rounds upward, so the ball always contains the exact
// value whenever its inputs did.
class RealBall {
 public:
  static constexpr mpfr_prec_t kRadiusPrec = 32;

  explicit RealBall(mpfr_prec_t prec = 128) {
    mpfr_init2(center_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
    mpfr_init2(radius_, kRadiusPrec);
    mpfr_set_zero(center_, 1);
    mpfr_set_zero(radius_, 1);
  }

  RealBall(const RealBall& o) {
    mpfr_init2(center_, mpfr_get_prec(o.center_));
    mpfr_init2(radius_, kRadiusPrec);
    mpfr_set(center_, o.center_, MPFR_RNDN);
    mpfr_set(radius_, o.radius_, MPFR_RNDU);
  }

  RealBall(RealBall&& o) noexcept {
    mpfr_init2(center_, MPFR_PREC_MIN);
    mpfr_init2(radius_, kRadiusPrec);
    mpfr_swap(center_, o.center_);
    mpfr_swap(radius_, o.radius_);
  }

  RealBall& operator=(RealBall o) noexcept {
    mpfr_swap(center_, o.center_);
    mpfr_swap(radius_, o.radius_);
    return *this;
  }

  ~RealBall() {
    mpfr_clear(center_);
    mpfr_clear(radius_);
  }

  static RealBall from_si(long v, mpfr_prec_t prec = 128) {
    RealBall r(prec);
    int t = mpfr_set_si(r.center_, v, MPFR_RNDN);
    r.bump_ulp(t);
    return r;
  }

  static RealBall from_z(const mpz_class& v, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_z(r.center_, v.get_mpz_t(), MPFR_RNDN);
    r.bump_ulp(t);
    return r;
  }

  static RealBall from_q(const mpq_class& v, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_q(r.center_, v.get_mpq_t(), MPFR_RNDN);
    r.bump_ulp(t);
    return r;
  }

  static RealBall from_double(double v, mpfr_prec_t prec = 64) {
    RealBall r(prec);
    mpfr_set_d(r.center_, v, MPFR_RNDN);
    return r;  // doubles are taken at face value (exact)
  }

  // Ball hull of a certified enclosure [lo, hi].
  static RealBall from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec) {
    RealBall r(prec);
    mpfr_add(r.center_, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(r.center_, r.center_, 1, MPFR_RNDN);
    mpfr_t t;
    mpfr_init2(t, kRadiusPrec);
    mpfr_sub(t, hi, r.center_, MPFR_RNDU);
    mpfr_sub(r.radius_, r.center_, lo, MPFR_RNDU);
    if (mpfr_cmp(t, r.radius_) > 0) mpfr_set(r.radius_, t, MPFR_RNDU);
    if (mpfr_sgn(r.radius_) < 0) mpfr_set_zero(r.radius_, 1);
    mpfr_clear(t);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(center_); }
  const mpfr_t& center() const { return center_; }
  const mpfr_t& radius() const { return radius_; }
  bool exact() const { return mpfr_zero_p(radius_); }

  double center_double() const { return mpfr_get_d(center_, MPFR_RNDN); }
  double radius_double() const { return mpfr_get_d(radius_, MPFR_RNDU); }

  // Certified upper/lower bound of the ball, rounded outward into `out`.
  void upper_bound(mpfr_t out) const { mpfr_add(out, center_, radius_, MPFR_RNDU); }
  void lower_bound(mpfr_t out) const { mpfr_sub(out, center_, radius_, MPFR_RNDD); }

  bool contains_zero() const {
    mpfr_t a;
    mpfr_init2(a, kRadiusPrec);
    mpfr_abs(a, center_, MPFR_RNDD);
    bool in = mpfr_cmp(a, radius_) <= 0;
    mpfr_clear(a);
    return in;
  }

  // Exact containment test against a rational (mpfr_cmp_q compares exactly).
  bool contains_q(const mpq_class& v) const {
    mpfr_t lo, hi;
    mpfr_init2(lo, precision() + 64);
    mpfr_init2(hi, precision() + 64);
    lower_bound(lo);
    upper_bound(hi);
    bool in = mpfr_cmp_q(lo, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi, v.get_mpq_t()) >= 0;
    mpfr_clear(lo);
    mpfr_clear(hi);
    return in;
  }

  bool is_positive_certified() const {
    mpfr_t lo;
    mpfr_init2(lo, kRadiusPrec);
    mpfr_sub(lo, center_, radius_, MPFR_RNDD);
    bool pos = mpfr_sgn(lo) > 0;
    mpfr_clear(lo);
    return pos;
  }

  bool is_negative_certified() const {
    mpfr_t hi;
    mpfr_init2(hi, kRadiusPrec);
    mpfr_add(hi, center_, radius_, MPFR_RNDU);
    bool neg = mpfr_sgn(hi) < 0;
    mpfr_clear(hi);
    return neg;
  }

  std::optional<mpz_class> floor_certified() const {
    mpfr_t lo, hi;
    mpfr_init2(lo, precision() + 64);
    mpfr_init2(hi, precision() + 64);
    lower_bound(lo);
    upper_bound(hi);
    mpz_class flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDD);
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (flo == fhi) return flo;
    return std::nullopt;
  }

  std::optional<mpz_class> ceil_certified() const {
    mpfr_t lo, hi;
    mpfr_init2(lo, precision() + 64);
    mpfr_init2(hi, precision() + 64);
    lower_bound(lo);
    upper_bound(hi);
    mpz_class clo, chi;
    mpfr_get_z(clo.get_mpz_t(), lo, MPFR_RNDU);
    mpfr_get_z(chi.get_mpz_t(), hi, MPFR_RNDU);
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (clo == chi) return clo;
    return std::nullopt;
  }

  std::string to_string(int digits = 20) const {
    char* cs = nullptr;
    char* rs = nullptr;
    int n1 = mpfr_asprintf(&cs, "%.*Rg", digits, center_);
    int n2 = mpfr_asprintf(&rs, "%.3Rg", radius_);
    std::string out;
    if (n1 >= 0 && n2 >= 0) {
      out = std::string(cs) + " +- " + std::string(rs);
    }
    if (cs) mpfr_free_str(cs);
    if (rs) mpfr_free_str(rs);
    return out;
  }

  // --- arithmetic -------------------------------------------------------

  friend RealBall operator-(const RealBall& a) {
    RealBall r(a.precision());
    mpfr_neg(r.center_, a.center_, MPFR_RNDN);
    mpfr_set(r.radius_, a.radius_, MPFR_RNDU);
    return r;
  }

  friend RealBall abs_ball(const RealBall& a) {
    RealBall r(a.precision());
    mpfr_abs(r.center_, a.center_, MPFR_RNDN);
    mpfr_set(r.radius_, a.radius_, MPFR_RNDU);
    return r;
  }

  friend RealBall operator+(const RealBall& a, const RealBall& b) {
    RealBall r(std::max(a.precision(), b.precision()));
    int t = mpfr_add(r.center_, a.center_, b.center_, MPFR_RNDN);
    mpfr_add(r.radius_, a.radius_, b.radius_, MPFR_RNDU);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall operator-(const RealBall& a, const RealBall& b) {
    RealBall r(std::max(a.precision(), b.precision()));
    int t = mpfr_sub(r.center_, a.center_, b.center_, MPFR_RNDN);
    mpfr_add(r.radius_, a.radius_, b.radius_, MPFR_RNDU);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall operator*(const RealBall& a, const RealBall& b) {
    RealBall r(std::max(a.precision(), b.precision()));
    int t = mpfr_mul(r.center_, a.center_, b.center_, MPFR_RNDN);
    // |a||rb| + |b||ra| + ra rb
    mpfr_t u, v;
    mpfr_init2(u, kRadiusPrec);
    mpfr_init2(v, kRadiusPrec);
    mpfr_abs(u, a.center_, MPFR_RNDU);
    mpfr_mul(u, u, b.radius_, MPFR_RNDU);
    mpfr_abs(v, b.center_, MPFR_RNDU);
    mpfr_mul(v, v, a.radius_, MPFR_RNDU);
    mpfr_add(u, u, v, MPFR_RNDU);
    mpfr_mul(v, a.radius_, b.radius_, MPFR_RNDU);
    mpfr_add(r.radius_, u, v, MPFR_RNDU);
    mpfr_clear(u);
    mpfr_clear(v);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall operator/(const RealBall& a, const RealBall& b) {
    mpfr_t den;
    mpfr_init2(den, kRadiusPrec);
    mpfr_abs(den, b.center_, MPFR_RNDD);
    mpfr_sub(den, den, b.radius_, MPFR_RNDD);
    if (mpfr_sgn(den) <= 0) {
      mpfr_clear(den);
      throw std::domain_error("RealBall division: divisor ball contains zero");
    }
    RealBall r(std::max(a.precision(), b.precision()));
    int t = mpfr_div(r.center_, a.center_, b.center_, MPFR_RNDN);
    // (|a| rb + ra |b|) / (|b| (|b| - rb))
    mpfr_t num, u;
    mpfr_init2(num, kRadiusPrec);
    mpfr_init2(u, kRadiusPrec);
    mpfr_abs(num, a.center_, MPFR_RNDU);
    mpfr_mul(num, num, b.radius_, MPFR_RNDU);
    mpfr_abs(u, b.center_, MPFR_RNDU);
    mpfr_mul(u, u, a.radius_, MPFR_RNDU);
    mpfr_add(num, num, u, MPFR_RNDU);
    mpfr_abs(u, b.center_, MPFR_RNDD);
    mpfr_mul(u, u, den, MPFR_RNDD);
    mpfr_div(r.radius_, num, u, MPFR_RNDU);
    mpfr_clear(num);
    mpfr_clear(u);
    mpfr_clear(den);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall mul_si(const RealBall& a, long k) {
    RealBall r(a.precision());
    int t = mpfr_mul_si(r.center_, a.center_, k, MPFR_RNDN);
    mpfr_mul_si(r.radius_, a.radius_, k < 0 ? -k : k, MPFR_RNDU);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall mul_z(const RealBall& a, const mpz_class& k) {
    RealBall r(a.precision());
    int t = mpfr_mul_z(r.center_, a.center_, k.get_mpz_t(), MPFR_RNDN);
    const mpz_class ak = abs(k);
    mpfr_t u;
    mpfr_init2(u, kRadiusPrec);
    mpfr_set_z(u, ak.get_mpz_t(), MPFR_RNDU);
    mpfr_mul(r.radius_, a.radius_, u, MPFR_RNDU);
    mpfr_clear(u);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall div_z(const RealBall& a, const mpz_class& k) {
    if (k == 0) throw std::domain_error("div_z: division by zero");
    RealBall r(a.precision());
    int t = mpfr_div_z(r.center_, a.center_, k.get_mpz_t(), MPFR_RNDN);
    const mpz_class ak = abs(k);
    mpfr_t u;
    mpfr_init2(u, kRadiusPrec);
    mpfr_set_z(u, ak.get_mpz_t(), MPFR_RNDD);
    mpfr_div(r.radius_, a.radius_, u, MPFR_RNDU);
    mpfr_clear(u);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall add_z(const RealBall& a, const mpz_class& k) {
    RealBall r(a.precision());
    int t = mpfr_add_z(r.center_, a.center_, k.get_mpz_t(), MPFR_RNDN);
    mpfr_set(r.radius_, a.radius_, MPFR_RNDU);
    r.bump_ulp(t);
    return r;
  }

  friend RealBall sub_q(const RealBall& a, const mpq_class& v) {
    RealBall r(a.precision());
    int t = mpfr_sub_q(r.center_, a.center_, v.get_mpq_t(), MPFR_RNDN);
    mpfr_set(r.radius_, a.radius_, MPFR_RNDU);
    r.bump_ulp(t);
    return r;
  }

  // Monotone functions evaluated on enclosure endpoints with directed
  // rounding, which keeps them tight and certifies the result.
  friend RealBall sqrt_ball(const RealBall& a) {
    mpfr_prec_t p = a.precision();
    mpfr_t lo, hi;
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    a.lower_bound(lo);
    a.upper_bound(hi);
    if (mpfr_sgn(hi) < 0) {
      mpfr_clear(lo);
      mpfr_clear(hi);
      throw std::domain_error("sqrt_ball: negative ball");
    }
    if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
    mpfr_sqrt(lo, lo, MPFR_RNDD);
    mpfr_sqrt(hi, hi, MPFR_RNDU);
    RealBall r = from_endpoints(lo, hi, p);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
  }

  friend RealBall log_ball(const RealBall& a) {
    mpfr_prec_t p = a.precision();
    mpfr_t lo, hi;
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    a.lower_bound(lo);
    a.upper_bound(hi);
    if (mpfr_sgn(lo) <= 0) {
      mpfr_clear(lo);
      mpfr_clear(hi);
      throw std::domain_error("log_ball: ball not certified positive");
    }
    mpfr_log(lo, lo, MPFR_RNDD);
    mpfr_log(hi, hi, MPFR_RNDU);
    RealBall r = from_endpoints(lo, hi, p);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
  }

  // exp(1) with a one-ulp radius.
  static RealBall euler_e(mpfr_prec_t prec) {
    RealBall r(prec);
    mpfr_t one;
    mpfr_init2(one, MPFR_PREC_MIN);
    mpfr_set_ui(one, 1, MPFR_RNDN);
    int t = mpfr_exp(r.center_, one, MPFR_RNDN);
    mpfr_clear(one);
    r.bump_ulp(t);
    return r;
  }

  static RealBall sqrt_z(const mpz_class& d, mpfr_prec_t prec) {
    return sqrt_ball(from_z(d, prec));
  }

  // max of two balls via endpoint hull: [max(lo_a, lo_b), max(hi_a, hi_b)].
  friend RealBall max_ball(const RealBall& a, const RealBall& b) {
    mpfr_prec_t p = std::max(a.precision(), b.precision());
    mpfr_t la, lb, ha, hb;
    mpfr_init2(la, p);
    mpfr_init2(lb, p);
    mpfr_init2(ha, p);
    mpfr_init2(hb, p);
    a.lower_bound(la);
    b.lower_bound(lb);
    a.upper_bound(ha);
    b.upper_bound(hb);
    if (mpfr_cmp(la, lb) < 0) mpfr_set(la, lb, MPFR_RNDD);
    if (mpfr_cmp(ha, hb) < 0) mpfr_set(ha, hb, MPFR_RNDU);
    RealBall r = from_endpoints(la, ha, p);
    mpfr_clear(la);
    mpfr_clear(lb);
    mpfr_clear(ha);
    mpfr_clear(hb);
    return r;
  }

 private:
  void bump_ulp(int ternary) {
    if (ternary == 0 || mpfr_zero_p(center_)) return;
    mpfr_t u;
    mpfr_init2(u, MPFR_PREC_MIN);
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(center_) - precision(), MPFR_RNDU);
    mpfr_add(radius_, radius_, u, MPFR_RNDU);
    mpfr_clear(u);
  }

  mpfr_t center_;
  mpfr_t radius_;
};

// Certified three-way comparison of two balls.
inline Cmp compare_certified(const RealBall& a, const RealBall& b) {
  mpfr_prec_t p = std::max(a.precision(), b.precision()) + 32;
  mpfr_t x, y;
  mpfr_init2(x, p);
  mpfr_init2(y, p);
  a.upper_bound(x);
  b.lower_bound(y);
  if (mpfr_cmp(x, y) < 0) {
    mpfr_clear(x);
    mpfr_clear(y);
    return Cmp::Less;
  }
  a.lower_bound(x);
  b.upper_bound(y);
  Cmp r = mpfr_cmp(x, y) > 0 ? Cmp::Greater : Cmp::Undecided;
  mpfr_clear(x);
  mpfr_clear(y);
  return r;
}

// Ball vs exact rational; the rational side is compared exactly, so
// non-strict bounds can be certified against it.
inline bool certified_le_q(const RealBall& a, const mpq_class& v) {
  mpfr_t hi;
  mpfr_init2(hi, a.precision() + 64);
  a.upper_bound(hi);
  bool ok = mpfr_cmp_q(hi, v.get_mpq_t()) <= 0;
  mpfr_clear(hi);
  return ok;
}

inline bool certified_ge_q(const RealBall& a, const mpq_class& v) {
  mpfr_t lo;
  mpfr_init2(lo, a.precision() + 64);
  a.lower_bound(lo);
  bool ok = mpfr_cmp_q(lo, v.get_mpq_t()) >= 0;
  mpfr_clear(lo);
  return ok;
}

inline bool certified_lt_q(const RealBall& a, const mpq_class& v) {
  mpfr_t hi;
  mpfr_init2(hi, a.precision() + 64);
  a.upper_bound(hi);
  bool ok = mpfr_cmp_q(hi, v.get_mpq_t()) < 0;
  mpfr_clear(hi);
  return ok;
}

inline bool certified_gt_q(const RealBall& a, const mpq_class& v) {
  mpfr_t lo;
  mpfr_init2(lo, a.precision() + 64);
  a.lower_bound(lo);
  bool ok = mpfr_cmp_q(lo, v.get_mpq_t()) > 0;
  mpfr_clear(lo);
  return ok;
}

// Strict certified a < b where b is itself a ball.
inline bool certified_lt(const RealBall& a, const RealBall& b) {
  return compare_certified(a, b) == Cmp::Less;
}

struct NearestInt {
  mpz_class n;
  RealBall dist;  // contains |x - n|, i.e. the distance to the nearest integer
};

// Nearest integer with its certified distance.  Requires radius < 1/4.
// An exact half-integer center resolves toward the floor.
inline NearestInt nearest_integer_distance(const RealBall& x) {
  {
    mpfr_t qtr;
    mpfr_init2(qtr, MPFR_PREC_MIN);
    mpfr_set_ui_2exp(qtr, 1, -2, MPFR_RNDN);
    bool ok = mpfr_cmp(x.radius(), qtr) < 0;
    mpfr_clear(qtr);
    if (!ok) throw std::domain_error("nearest_integer_distance: radius too large");
  }
  NearestInt out{mpz_class(0), RealBall(x.precision())};
  mpfr_t t;
  mpfr_init2(t, x.precision() + 8);
  int inexact = mpfr_sub_d(t, x.center(), 0.5, MPFR_RNDN);
  if (inexact != 0) {
    // center too large for the shift to be exact; it is then an integer
    mpfr_get_z(out.n.get_mpz_t(), x.center(), MPFR_RNDN);
  } else {
    mpfr_get_z(out.n.get_mpz_t(), t, MPFR_RNDU);  // ceil(c - 1/2)
  }
  mpfr_clear(t);
  RealBall diff = add_z(x, -out.n);
  out.dist = abs_ball(diff);
  return out;
}

}  // namespace inhomog
