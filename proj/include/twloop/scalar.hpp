#ifndef TWLOOP_SCALAR_HPP
#define TWLOOP_SCALAR_HPP

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twloop {

/// Exact rational; gmp keeps it canonical (gcd 1, positive denominator).
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw std::invalid_argument("bad rational: " + std::string(s));
  }
  std::string t(s);
  if (t[0] == '+') t.erase(0, 1);
  Rational q;
  if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational: " + std::string(s));
  if (q.get_den() == 0) throw std::domain_error("rational with zero denominator");
  q.canonicalize();
  return q;
}

inline bool valid_order(int m) { return m == 1 || m == 2 || m == 3; }

/// a + b*z in Q(z_m), z a primitive m-th root of unity, m in {1,2,3}.
/// For m <= 2 the field is Q and b is always 0.  Values with m = 1 are plain
/// rationals and combine with any m (Q sits inside every Q(z_m)).
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int m, Rational a, Rational b = 0) : m_(m), a_(std::move(a)), b_(std::move(b)) {
    if (!valid_order(m)) throw std::invalid_argument("order must be 1, 2 or 3");
    if (m <= 2 && b_ != 0) throw std::invalid_argument("z-coefficient must vanish for m <= 2");
  }

  static Scalar zeta(int m) {
    if (m == 1) return Scalar(1, 1);
    if (m == 2) return Scalar(2, -1);
    return Scalar(3, 0, 1);
  }

  int order() const { return m_; }
  const Rational& re() const { return a_; }
  const Rational& zc() const { return b_; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_one() const { return a_ == 1 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  Scalar& operator+=(const Scalar& o) {
    m_ = join(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    m_ = join(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    int m = join(o);
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
      a_ *= o.a_;
    } else {
      // z^2 = -1 - z
      Rational bd = b_ * o.b_;
      Rational na = a_ * o.a_ - bd;
      Rational nb = a_ * o.b_ + b_ * o.a_ - bd;
      a_ = std::move(na);
      b_ = std::move(nb);
    }
    m_ = m;
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return *this *= o.inverse();
  }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (sgn(b_) == 0) return Scalar(m_, 1 / a_);
    // (a + b z)(a + b z^2) = a^2 - ab + b^2 = N; z^2 = -1 - z
    Rational n = a_ * a_ - a_ * b_ + b_ * b_;
    return Scalar(m_, (a_ - b_) / n, -b_ / n);
  }

  Scalar operator-() const {
    Scalar r(*this);
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

  /// Deterministic total order: lexicographic on (a, b).  Not a field order.
  friend bool lex_less(const Scalar& x, const Scalar& y) {
    int c = cmp(x.a_, y.a_);
    if (c != 0) return c < 0;
    return cmp(x.b_, y.b_) < 0;
  }

  Scalar pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar r(m_, 1), base(*this);
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  /// Same value viewed in Q(z_m).  Only legal from m = 1 or equal m.
  Scalar with_order(int m) const {
    if (m_ != 1 && m_ != m) throw std::invalid_argument("mismatched field orders");
    if (m_ == m) return *this;
    return Scalar(m, a_, b_);
  }

  std::string str() const {
    if (sgn(b_) == 0) return a_.get_str();
    std::string s = a_.get_str();
    if (sgn(b_) > 0) {
      s += "+";
      s += b_.get_str();
    } else {
      s += "-";
      s += Rational(-b_).get_str();
    }
    return s + "*z";
  }

  std::size_t hash() const {
    std::hash<std::string> h;
    return h(a_.get_str()) * 1000003u ^ h(b_.get_str());
  }

 private:
  int join(const Scalar& o) const {
    if (m_ == o.m_) return m_;
    if (m_ == 1) return o.m_;
    if (o.m_ == 1) return m_;
    throw std::invalid_argument("mismatched field orders " + std::to_string(m_) + " and " +
                                std::to_string(o.m_));
  }

  int m_ = 1;
  Rational a_ = 0;
  Rational b_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

enum class Op { add, sub, mul, div };

inline Scalar scalar_arith(const Scalar& x, const Scalar& y, Op op) {
  if (x.order() != y.order()) throw std::invalid_argument("mismatched field orders");
  switch (op) {
    case Op::add: return x + y;
    case Op::sub: return x - y;
    case Op::mul: return x * y;
    case Op::div: return x / y;
  }
  return {};
}

inline Scalar zeta_power(int m, long e) {
  if (!valid_order(m)) throw std::invalid_argument("order must be 1, 2 or 3");
  long r = ((e % m) + m) % m;
  if (r == 0) return Scalar(m, 1);
  if (m == 2) return Scalar(2, -1);
  if (r == 1) return Scalar(3, 0, 1);
  return Scalar(3, -1, -1);
}

/// Parses "a", "a/b", "a/b+c/d*z", "c/d*z", "z", "-z".  m fixes the field.
inline Scalar parse_scalar(std::string_view s, int m) {
  if (!valid_order(m)) throw std::invalid_argument("order must be 1, 2 or 3");
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty scalar");
  if (t.back() != 'z') return Scalar(m, parse_rational(t));
  if (m != 3) throw std::invalid_argument("z-term only allowed for m = 3");
  std::string body = t.substr(0, t.size() - 1);
  if (!body.empty() && body.back() == '*') body.pop_back();
  // split at the last sign that is not in leading position
  std::size_t cut = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != '/') {
      cut = i;
      break;
    }
  }
  std::string ra = cut == std::string::npos ? "0" : body.substr(0, cut);
  std::string rb = cut == std::string::npos ? body : body.substr(cut);
  Rational b;
  if (rb.empty() || rb == "+") b = 1;
  else if (rb == "-") b = -1;
  else b = parse_rational(rb);
  return Scalar(3, parse_rational(ra), b);
}

}  // namespace twloop

template <>
struct std::hash<twloop::Scalar> {
  std::size_t operator()(const twloop::Scalar& s) const { return s.hash(); }
};

#endif
