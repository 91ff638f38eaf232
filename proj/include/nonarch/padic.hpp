#pragma once

// Exact arithmetic in Q_p: rationals carrying a p-adic valuation.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace nonarch {

struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Exact rational number in lowest terms. Elements of Q_p are modelled as
/// rationals; the valuation is supplied by a FieldSpec.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long num, long den) {
    if (den == 0) throw domain_error("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Scalar(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  Scalar(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw domain_error("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  /// Parses "a", "a/b" or "-a/b" (surrounding whitespace not allowed).
  static Scalar parse(std::string_view text) {
    if (text.empty()) throw validation_error("empty scalar literal");
    const auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) {
      if (s.empty()) throw validation_error("malformed scalar literal: " + std::string(text));
      std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
      if (start == s.size()) throw validation_error("malformed scalar literal: " + std::string(text));
      for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
          throw validation_error("malformed scalar literal: " + std::string(text));
        }
      }
      return mpz_class(std::string(s[0] == '+' ? s.substr(1) : s), 10);
    };
    if (slash == std::string_view::npos) return Scalar(mpq_class(parse_int(text)));
    mpz_class num = parse_int(text.substr(0, slash));
    mpz_class den = parse_int(text.substr(slash + 1));
    if (den == 0) throw validation_error("zero denominator in scalar literal: " + std::string(text));
    return Scalar(num, den);
  }

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  bool is_integer() const { return q_.get_den() == 1; }

  /// "num/den", with the denominator omitted when it is 1.
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Scalar inv() const {
    if (is_zero()) throw domain_error("inverse of zero");
    return Scalar(mpq_class(1) / q_);
  }

  Scalar pow(long e) const {
    if (e < 0) return inv().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Scalar(n, d);
  }

  /// Floor and ceiling as integers (weights are small, so long suffices).
  long floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r.get_si();
  }
  long ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r.get_si();
  }

  Scalar& operator+=(const Scalar& o) { q_ += o.q_; return *this; }
  Scalar& operator-=(const Scalar& o) { q_ -= o.q_; return *this; }
  Scalar& operator*=(const Scalar& o) { q_ *= o.q_; return *this; }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(mpq_class(-a.q_)); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  mpq_class q_{0};
};

inline Scalar add(const Scalar& a, const Scalar& b) { return a + b; }
inline Scalar sub(const Scalar& a, const Scalar& b) { return a - b; }
inline Scalar mul(const Scalar& a, const Scalar& b) { return a * b; }
inline Scalar inv(const Scalar& a) { return a.inv(); }
inline Scalar pow(const Scalar& a, long e) { return a.pow(e); }

inline Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

/// Integer or +infinity; the valuation of a scalar.
class Valuation {
 public:
  Valuation() = default;  // +infinity
  explicit Valuation(long v) : v_(v) {}
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return !v_.has_value(); }
  long value() const {
    if (!v_) throw domain_error("valuation of zero is infinite");
    return *v_;
  }

  friend bool operator==(const Valuation& a, const Valuation& b) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    return *a.v_ <=> *b.v_;
  }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return Valuation(*a.v_ + *b.v_);
  }

  std::string str() const { return v_ ? std::to_string(*v_) : "inf"; }
  friend std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

 private:
  std::optional<long> v_;
};

/// Rational extended by -inf and +inf. Norm values and absolute values are
/// carried as base-p exponents in this type so they stay exact.
class ExtRational {
 public:
  enum class Kind : std::int8_t { NegInf = -1, Finite = 0, PosInf = 1 };

  ExtRational() = default;
  ExtRational(Scalar v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtRational(long v) : value_(v) {}               // NOLINT(google-explicit-constructor)
  static ExtRational pos_inf() { return ExtRational(Kind::PosInf); }
  static ExtRational neg_inf() { return ExtRational(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  const Scalar& value() const {
    if (!is_finite()) throw domain_error("value of an infinite exponent");
    return value_;
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  friend ExtRational operator-(const ExtRational& a) {
    if (a.is_pos_inf()) return neg_inf();
    if (a.is_neg_inf()) return pos_inf();
    return ExtRational(-a.value_);
  }
  /// Shift by a finite amount; infinities absorb.
  friend ExtRational operator+(const ExtRational& a, const Scalar& b) {
    if (!a.is_finite()) return a;
    return ExtRational(a.value_ + b);
  }

  std::string str() const {
    switch (kind_) {
      case Kind::PosInf: return "inf";
      case Kind::NegInf: return "-inf";
      default: return value_.str();
    }
  }
  static ExtRational parse(std::string_view text) {
    if (text == "inf" || text == "+inf") return pos_inf();
    if (text == "-inf") return neg_inf();
    return ExtRational(Scalar::parse(text));
  }
  friend std::ostream& operator<<(std::ostream& os, const ExtRational& v) { return os << v.str(); }

 private:
  explicit ExtRational(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Scalar value_;
};

inline bool is_prime(long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// The field Q_p for a validated prime p.
class FieldSpec {
 public:
  static constexpr long kMaxPrime = 1'000'000;

  explicit FieldSpec(long p) : p_(p) {
    if (p > kMaxPrime) throw validation_error("prime out of supported range: " + std::to_string(p));
    if (!is_prime(p)) throw validation_error("not a prime: " + std::to_string(p));
  }
  long p() const { return p_; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  long p_;
};

namespace detail {
inline long strip_factor(mpz_class& z, long p) {
  if (z == 0) return 0;
  mpz_class pp(p);
  return static_cast<long>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}
}  // namespace detail

inline Valuation val(const FieldSpec& f, const Scalar& x) {
  if (x.is_zero()) return Valuation::infinity();
  mpz_class n = x.num(), d = x.den();
  return Valuation(detail::strip_factor(n, f.p()) - detail::strip_factor(d, f.p()));
}

/// log_p |x| = -val(x); -inf for zero.
inline ExtRational abs_exp(const FieldSpec& f, const Scalar& x) {
  const Valuation v = val(f, x);
  if (v.is_infinite()) return ExtRational::neg_inf();
  return ExtRational(Scalar(-v.value()));
}

/// |x|_p as an exact rational p^{-val(x)}.
inline Scalar abs_value(const FieldSpec& f, const Scalar& x) {
  const Valuation v = val(f, x);
  if (v.is_infinite()) return Scalar(0);
  return Scalar(f.p()).pow(-v.value());
}

inline Scalar p_power(const FieldSpec& f, long k) { return Scalar(f.p()).pow(k); }

/// Unit part x / p^{val(x)}; requires x != 0.
inline Scalar unit_part(const FieldSpec& f, const Scalar& x) {
  return x / p_power(f, val(f, x).value());
}

/// Canonical representative of the class of x in Q_p / p^level Z_p: the
/// truncation of the p-adic expansion of x below p^level, written m / p^s
/// with 0 <= m < p^(level + s).
inline Scalar residue_rep(const FieldSpec& f, const Scalar& x, long level) {
  const Valuation v = val(f, x);
  if (v.is_infinite() || v.value() >= level) return Scalar(0);
  const long s = std::max(0L, -v.value());
  const Scalar scaled = x * p_power(f, s);  // p-integral, denominator prime to p
  mpz_class modulus;
  mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(f.p()),
                static_cast<unsigned long>(level + s));
  mpz_class inv_den;
  const mpz_class den = scaled.den();
  if (mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw domain_error("denominator not invertible modulo p^k");
  }
  mpz_class m = scaled.num() * inv_den;
  mpz_mod(m.get_mpz_t(), m.get_mpz_t(), modulus.get_mpz_t());
  mpz_class den_out;
  mpz_ui_pow_ui(den_out.get_mpz_t(), static_cast<unsigned long>(f.p()), static_cast<unsigned long>(s));
  return Scalar(m, den_out);
}

/// Capped-precision p-adic digit expansion for display, most significant
/// digit first: "...d2 d1 d0 . d-1 d-2" in base p, e.g. "...0012.1".
inline std::string padic_digits(const FieldSpec& f, const Scalar& x, long precision = 8) {
  if (x.is_zero()) return "0";
  const long v = val(f, x).value();
  const long lo = std::min(0L, v);
  const long hi = std::max(v + precision, 1L);
  const Scalar rep = residue_rep(f, x, hi);
  // rep = m / p^(-lo) with m an integer, digits read from m.
  mpz_class m = (rep * p_power(f, -lo)).num();
  std::string digits;
  const bool wide = f.p() > 10;
  for (long k = lo; k < hi; ++k) {
    mpz_class d;
    mpz_fdiv_qr_ui(m.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(f.p()));
    std::string ds = d.get_str();
    if (wide) ds = "[" + ds + "]";
    if (k == 0 && lo < 0) ds += ".";
    digits.insert(0, ds);
  }
  return "..." + digits;
}

}  // namespace nonarch
