#include "alphaquota/rational.hpp"

#include <ostream>
#include <stdexcept>

#include "alphaquota/errors.hpp"

namespace alphaquota {

namespace {

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("rational component exceeds int64");
  return z.get_si();
}

mpz_class floor_of(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(static_cast<long>(value)) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(numerator)), mpz_class(static_cast<long>(denominator)));
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  mpq_class out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) throw ParseError("invalid rational '" + std::string(text) + "'");
    mpz_class d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    out = mpq_class(mpz_class(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw ParseError("invalid rational '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num{std::string(whole.empty() ? "0" : whole)};
    num = num * scale + (frac.empty() ? mpz_class(0) : mpz_class(std::string(frac)));
    out = mpq_class(num, scale);
  } else {
    if (!is_digits(s)) throw ParseError("invalid rational '" + std::string(text) + "'");
    out = mpq_class(mpz_class(std::string(s)));
  }
  if (negative) out = -out;
  return Rational(out);
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

std::int64_t Rational::floor() const { return to_int64(floor_of(value_)); }

std::int64_t Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return to_int64(r);
}

std::string Rational::numerator_str() const { return value_.get_num().get_str(); }
std::string Rational::denominator_str() const { return value_.get_den().get_str(); }
std::int64_t Rational::numerator() const { return to_int64(value_.get_num()); }
std::int64_t Rational::denominator() const { return to_int64(value_.get_den()); }

double Rational::to_double() const {
  // Both operands convert exactly below 2^53, so IEEE division rounds once.
  const mpz_class& num = value_.get_num();
  const mpz_class& den = value_.get_den();
  if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
    return num.get_d() / den.get_d();
  }
  return mpf_class(value_, 256).get_d();
}

std::string Rational::to_string() const { return numerator_str() + "/" + denominator_str(); }

Rational Rational::simplest_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("simplest_between requires lo < hi");
  // Continued-fraction walk: the first convergent strictly inside (lo, hi).
  // Handles the integer part first so the recursion only sees [0, 1).
  const mpq_class& a = lo.value_;
  const mpq_class& b = hi.value_;
  mpz_class fa = floor_of(a);
  if (mpq_class(fa + 1) < b) {
    // An integer lies strictly inside; pick the one closest to zero.
    mpz_class lo_int = fa + 1;
    mpz_class hi_int;
    mpz_cdiv_q(hi_int.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    hi_int -= 1;
    if (lo_int <= 0 && hi_int >= 0) return Rational(0);
    return Rational(mpq_class(lo_int > 0 ? lo_int : hi_int));
  }
  // Both ends share the integer part fa (b may equal fa + 1).
  mpq_class frac_lo = a - fa;
  mpq_class frac_hi = b - fa;
  // simplest in (frac_lo, frac_hi) with 0 <= frac_lo < frac_hi <= 1:
  // invert: x in (lo, hi)  <=>  1/x in (1/hi, 1/lo).
  mpq_class inner;
  if (frac_lo == 0) {
    // (0, frac_hi): smallest denominator is 1/ceil(1/frac_hi + tiny).
    mpq_class inv = 1 / frac_hi;
    mpz_class d = floor_of(inv) + 1;
    inner = mpq_class(1, 1) / mpq_class(d);
  } else {
    Rational rec = simplest_between(Rational(mpq_class(1 / frac_hi)), Rational(mpq_class(1 / frac_lo)));
    inner = 1 / rec.value_;
  }
  return Rational(mpq_class(fa + inner));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace alphaquota
