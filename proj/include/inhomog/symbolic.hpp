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

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>

#include "inhomog/real_ball.hpp"

namespace inhomog {

// Exact symbolic real number, one of
//   Rational   b                   (optionally tagged as a decimal literal)
//   Quadratic  a*sqrt(disc) + b    with a != 0 and disc a nonsquare >= 2
//   Euler      a*e + b             with a != 0
// with a, b rational.  Quadratic values form the field Q(sqrt(disc)), so
// the grammar's arithmetic stays exact.  A decimal literal is stored as the
// exact rational it spells, together with the half-ulp uncertainty implied
// by its digit count ("fuzz"); continued-fraction code uses the fuzz to
// bound how deep an expansion the literal can certify.
class SymValue {
 public:
  enum class Kind { Rational, Quadratic, Euler };

  SymValue() : kind_(Kind::Rational), a_(0), b_(0), disc_(0), fuzz_(0) {}

  static SymValue rational(const mpq_class& v) {
    SymValue s;
    s.b_ = v;
    s.b_.canonicalize();
    return s;
  }

  static SymValue integer(long v) { return rational(mpq_class(v)); }

  static SymValue decimal_literal(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) return rational(mpq_class(text, 10));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac = text.size() - dot - 1;
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den = 1;
    for (size_t i = 0; i < frac; ++i) den *= 10;
    SymValue s;
    s.b_ = mpq_class(num, den);
    s.b_.canonicalize();
    s.fuzz_ = mpq_class(1, 2 * den);
    return s;
  }

  static SymValue quadratic(const mpq_class& coeff, const mpq_class& off, const mpz_class& disc) {
    if (coeff == 0) return rational(off);
    SymValue s = make_sqrt(disc);
    if (s.kind_ == Kind::Rational) {
      return rational(coeff * s.b_ + off);
    }
    s.a_ = coeff * s.a_;
    s.b_ = off;
    s.a_.canonicalize();
    s.b_.canonicalize();
    return s;
  }

  static SymValue euler_affine(const mpq_class& coeff, const mpq_class& off) {
    if (coeff == 0) return rational(off);
    SymValue s;
    s.kind_ = Kind::Euler;
    s.a_ = coeff;
    s.b_ = off;
    return s;
  }

  static SymValue golden_ratio() {
    return quadratic(mpq_class(1, 2), mpq_class(1, 2), 5);
  }

  // sqrt of a nonnegative rational, with square factors pulled out so equal
  // surds normalize to the same discriminant.
  static SymValue sqrt_of(const SymValue& v) {
    if (v.kind_ != Kind::Rational)
      throw std::invalid_argument("sqrt() only accepts rational arguments");
    if (v.fuzz_ != 0)
      throw std::invalid_argument("sqrt() of a decimal literal is not supported; write an exact fraction");
    if (v.b_ < 0) throw std::invalid_argument("sqrt() of a negative value");
    // sqrt(n/m) = sqrt(n*m)/m
    mpz_class n = v.b_.get_num() * v.b_.get_den();
    SymValue s = make_sqrt(n);
    mpq_class scale(1, v.b_.get_den());
    return s.scaled(scale);
  }

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::Rational; }
  bool certified_irrational() const { return kind_ != Kind::Rational; }
  bool assumed_irrational() const { return kind_ == Kind::Rational && fuzz_ != 0; }
  bool is_decimal_literal() const { return fuzz_ != 0; }
  const mpq_class& fuzz() const { return fuzz_; }

  const mpq_class& exact_rational() const {
    if (kind_ != Kind::Rational)
      throw std::logic_error("exact_rational() on an irrational value");
    return b_;
  }

  const mpq_class& coeff() const { return a_; }
  const mpq_class& offset() const { return b_; }
  const mpz_class& disc() const { return disc_; }

  bool operator==(const SymValue& o) const {
    return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_ && disc_ == o.disc_;
  }

  // Exact sign of the value (-1, 0, +1).
  int sign() const {
    switch (kind_) {
      case Kind::Rational:
        return sgn(b_);
      case Kind::Quadratic: {
        // sign of a*sqrt(d) + b: compare a^2 d against b^2 on the side where
        // the two terms disagree.
        int sa = sgn(a_), sb = sgn(b_);
        if (sa == sb || sb == 0) return sa;
        mpq_class lhs = a_ * a_ * mpq_class(disc_);
        mpq_class rhs = b_ * b_;
        int big = lhs > rhs ? sa : (lhs < rhs ? sb : 0);
        return big;
      }
      case Kind::Euler: {
        for (mpfr_prec_t p = 128; p <= 4096; p *= 2) {
          RealBall v = eval(p);
          if (v.is_positive_certified()) return 1;
          if (v.is_negative_certified()) return -1;
        }
        throw PrecisionExhausted("sign of Euler-affine value undecided");
      }
    }
    return 0;
  }

  RealBall eval(mpfr_prec_t prec) const {
    switch (kind_) {
      case Kind::Rational:
        return RealBall::from_q(b_, prec);
      case Kind::Quadratic: {
        RealBall root = RealBall::sqrt_z(disc_, prec);
        return RealBall::from_q(a_, prec) * root + RealBall::from_q(b_, prec);
      }
      case Kind::Euler:
        return RealBall::from_q(a_, prec) * RealBall::euler_e(prec) +
               RealBall::from_q(b_, prec);
    }
    return RealBall(prec);
  }

  // Like eval() but widened by the literal's stated uncertainty.
  RealBall eval_with_fuzz(mpfr_prec_t prec) const {
    RealBall v = eval(prec);
    if (fuzz_ == 0) return v;
    RealBall pad = RealBall::from_q(fuzz_, RealBall::kRadiusPrec + 8);
    RealBall lo = v - pad, hi = v + pad;
    mpfr_t l, h;
    mpfr_init2(l, prec);
    mpfr_init2(h, prec);
    lo.lower_bound(l);
    hi.upper_bound(h);
    RealBall out = RealBall::from_endpoints(l, h, prec);
    mpfr_clear(l);
    mpfr_clear(h);
    return out;
  }

  friend SymValue operator-(const SymValue& v) {
    SymValue r = v;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  friend SymValue operator+(const SymValue& x, const SymValue& y) {
    if (x.kind_ == Kind::Rational) return y.affine(mpq_class(1), x.b_, x.fuzz_);
    if (y.kind_ == Kind::Rational) return x.affine(mpq_class(1), y.b_, y.fuzz_);
    if (x.kind_ != y.kind_) throw std::invalid_argument("cannot mix sqrt() and e in one expression");
    if (x.kind_ == Kind::Quadratic && x.disc_ != y.disc_)
      throw std::invalid_argument("cannot mix sqrt() of different square-free parts");
    SymValue r = x;
    r.a_ += y.a_;
    r.b_ += y.b_;
    return r.normalized();
  }

  friend SymValue operator-(const SymValue& x, const SymValue& y) { return x + (-y); }

  friend SymValue operator*(const SymValue& x, const SymValue& y) {
    if (x.kind_ == Kind::Rational && y.kind_ == Kind::Rational) {
      SymValue r = rational(x.b_ * y.b_);
      r.fuzz_ = abs(x.b_) * y.fuzz_ + abs(y.b_) * x.fuzz_ + x.fuzz_ * y.fuzz_;
      return r;
    }
    if (x.kind_ == Kind::Rational) return y.affine(x.b_, mpq_class(0), x.fuzz_);
    if (y.kind_ == Kind::Rational) return x.affine(y.b_, mpq_class(0), y.fuzz_);
    if (x.kind_ == Kind::Quadratic && y.kind_ == Kind::Quadratic && x.disc_ == y.disc_) {
      // (a sqrt(d) + b)(a' sqrt(d) + b') = (ab' + a'b) sqrt(d) + (aa'd + bb')
      SymValue r;
      r.kind_ = Kind::Quadratic;
      r.disc_ = x.disc_;
      r.a_ = x.a_ * y.b_ + y.a_ * x.b_;
      r.b_ = x.a_ * y.a_ * mpq_class(x.disc_) + x.b_ * y.b_;
      return r.normalized();
    }
    throw std::invalid_argument("product of these irrational values is not representable");
  }

  friend SymValue operator/(const SymValue& x, const SymValue& y) {
    if (y.kind_ == Kind::Rational) {
      if (y.b_ == 0) throw std::invalid_argument("division by zero");
      if (y.fuzz_ != 0) {
        if (x.kind_ != Kind::Rational)
          throw std::invalid_argument("cannot divide an exact irrational by a decimal literal");
        if (abs(y.b_) <= y.fuzz_) throw std::invalid_argument("division by a literal whose uncertainty reaches zero");
        SymValue r = rational(x.b_ / y.b_);
        r.fuzz_ = (x.fuzz_ + abs(r.b_) * y.fuzz_) / (abs(y.b_) - y.fuzz_);
        return r;
      }
      return x.affine(mpq_class(1) / y.b_, mpq_class(0), mpq_class(0));
    }
    if (y.kind_ == Kind::Quadratic) {
      // 1/(a sqrt(d) + b) = (b - a sqrt(d)) / (b^2 - a^2 d)
      mpq_class den = y.b_ * y.b_ - y.a_ * y.a_ * mpq_class(y.disc_);
      if (den == 0) throw std::invalid_argument("division by zero");
      SymValue inv;
      inv.kind_ = Kind::Quadratic;
      inv.disc_ = y.disc_;
      inv.a_ = -y.a_ / den;
      inv.b_ = y.b_ / den;
      return x * inv.normalized();
    }
    throw std::invalid_argument("division by an e-expression is not representable");
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Rational:
        return b_.get_str();
      case Kind::Quadratic: {
        std::string s = "(" + a_.get_str() + "*sqrt(" + disc_.get_str() + ")";
        if (b_ != 0) s += (b_ > 0 ? "+" : "") + b_.get_str();
        return s + ")";
      }
      case Kind::Euler: {
        std::string s = "(" + a_.get_str() + "*e";
        if (b_ != 0) s += (b_ > 0 ? "+" : "") + b_.get_str();
        return s + ")";
      }
    }
    return "";
  }

  // Parses the expression grammar:
  //   expr    := term (('+'|'-') term)*
  //   term    := unary (('*'|'/') unary)*
  //   unary   := '-' unary | primary
  //   primary := number | 'sqrt' '(' expr ')' | 'golden' | 'phi' | 'e' | '(' expr ')'
  // Numbers with a decimal point become literals carrying half-ulp fuzz;
  // plain integers and fractions like 7/5 stay exact.
  static SymValue parse(const std::string& text);

 private:
  static SymValue make_sqrt(mpz_class d) {
    if (d < 0) throw std::invalid_argument("sqrt() of a negative value");
    // pull out square factors (small trial divisors, then a final square test)
    mpz_class outer = 1;
    for (unsigned long p = 2; p <= 1000; p = (p == 2 ? 3 : p + 2)) {
      mpz_class pp = mpz_class(p) * p;
      while (d % pp == 0) {
        d /= pp;
        outer *= p;
      }
      if (pp > d) break;
    }
    if (mpz_perfect_square_p(d.get_mpz_t())) {
      mpz_class root;
      mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
      return rational(mpq_class(outer * root));
    }
    SymValue s;
    s.kind_ = Kind::Quadratic;
    s.disc_ = d;
    s.a_ = mpq_class(outer);
    s.b_ = 0;
    return s;
  }

  SymValue scaled(const mpq_class& f) const {
    SymValue r = *this;
    r.a_ *= f;
    r.b_ *= f;
    r.fuzz_ *= abs(f);
    return r.normalized();
  }

  // this * scale + shift, with fuzz from a rational partner folded in.
  SymValue affine(const mpq_class& scale, const mpq_class& shift, const mpq_class& partner_fuzz) const {
    if (partner_fuzz != 0 && kind_ != Kind::Rational)
      throw std::invalid_argument("cannot combine a decimal literal with an exact irrational; write the literal as a fraction");
    SymValue r = *this;
    r.a_ *= scale;
    r.b_ = r.b_ * scale + shift;
    r.fuzz_ = r.fuzz_ * abs(scale) + partner_fuzz;
    return r.normalized();
  }

  SymValue normalized() {
    if (kind_ != Kind::Rational && a_ == 0) {
      kind_ = Kind::Rational;
      disc_ = 0;
    }
    a_.canonicalize();
    b_.canonicalize();
    return *this;
  }

  Kind kind_;
  mpq_class a_, b_;
  mpz_class disc_;
  mpq_class fuzz_;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  SymValue run() {
    SymValue v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  SymValue expr() {
    SymValue v = term();
    while (true) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        v = v + term();
      } else if (peek() == '-') {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  SymValue term() {
    SymValue v = unary();
    while (true) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        v = v * unary();
      } else if (peek() == '/') {
        ++pos_;
        v = v / unary();
      } else {
        return v;
      }
    }
  }

  SymValue unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return primary();
  }

  SymValue primary() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      SymValue v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) name.push_back(s_[pos_++]);
      if (name == "sqrt") {
        expect('(');
        SymValue v = expr();
        expect(')');
        return SymValue::sqrt_of(v);
      }
      if (name == "golden" || name == "phi") return SymValue::golden_ratio();
      if (name == "e") return SymValue::euler_affine(mpq_class(1), mpq_class(0));
      fail("unknown name '" + name + "'");
    }
    fail("unexpected character");
    return SymValue();
  }

  SymValue number() {
    size_t start = pos_;
    bool dot = false;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      if (s_[pos_] == '.') {
        if (dot) fail("malformed number");
        dot = true;
      }
      ++pos_;
    }
    std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty() || tok == ".") fail("malformed number");
    if (dot) return SymValue::decimal_literal(tok);
    return SymValue::rational(mpq_class(tok, 10));
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse error at position " + std::to_string(pos_) + ": " + msg);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace detail

inline SymValue SymValue::parse(const std::string& text) {
  return detail::ExprParser(text).run();
}

// A target (xi, y) for the linear form q*xi + p - y.
struct TargetProblem {
  SymValue xi;
  SymValue y;
  std::string label;

  static TargetProblem from_strings(const std::string& xi_expr, const std::string& y_expr,
                                    std::string label = {}) {
    TargetProblem p;
    p.xi = SymValue::parse(xi_expr);
    p.y = SymValue::parse(y_expr);
    p.label = label.empty() ? ("xi=" + xi_expr + ",y=" + y_expr) : std::move(label);
    return p;
  }

  // Continued-fraction machinery needs xi irrational (certified) or a
  // decimal literal explicitly flagged as assumed irrational.
  bool xi_usable_as_irrational() const {
    return xi.certified_irrational() || xi.assumed_irrational();
  }
};

// Ball for |q*xi + p - y| at the given precision.
inline RealBall eval_linear_form(const mpz_class& p, const mpz_class& q, const TargetProblem& prob,
                                 mpfr_prec_t prec) {
  RealBall xi = prob.xi.eval(prec);
  RealBall y = prob.y.eval(prec);
  RealBall v = add_z(mul_z(xi, q), p) - y;
  return abs_ball(v);
}

// Same, with the precision chosen so the radius is at most 2^-guard
// relative to the scale of q; escalates until the policy cap, then throws.
inline RealBall eval_linear_form_auto(const mpz_class& p, const mpz_class& q,
                                      const TargetProblem& prob, long guard = 64,
                                      const PrecisionPolicy& pol = {}) {
  const mpfr_prec_t qbits =
      q == 0 ? 1 : static_cast<mpfr_prec_t>(mpz_sizeinbase(q.get_mpz_t(), 2));
  mpfr_prec_t prec = std::min<mpfr_prec_t>(
      pol.max_bits, std::max<mpfr_prec_t>(pol.start_bits, qbits + guard + 64));
  for (;; prec = pol.next(prec)) {
    RealBall v = eval_linear_form(p, q, prob, prec);
    mpfr_t tol;
    mpfr_init2(tol, RealBall::kRadiusPrec);
    mpfr_set_ui_2exp(tol, 1, -guard, MPFR_RNDN);
    bool small = mpfr_cmp(v.radius(), tol) <= 0;
    mpfr_clear(tol);
    if (small) return v;
    if (!pol.can_escalate(prec))
      throw PrecisionExhausted("eval_linear_form: radius above tolerance at precision cap");
  }
}

}  // namespace inhomog
