#include "homc/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace homc {

namespace {

using Int128 = __int128;

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(Int128 v) {
  if (v > Int128(std::numeric_limits<std::int64_t>::max()) ||
      v < Int128(std::numeric_limits<std::int64_t>::min())) {
    throw std::overflow_error("Rational: result does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

std::pair<std::int64_t, std::int64_t> reduce(Int128 num, Int128 den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return {0, 1};
  Int128 g = gcd128(num, den);
  return {narrow(num / g), narrow(den / g)};
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("Rational: cannot parse integer '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  auto [n, d] = reduce(num, den);
  num_ = n;
  den_ = d;
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 18) {
      throw std::invalid_argument("Rational: cannot parse decimal '" + std::string(text) + "'");
    }
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    std::int64_t f = parse_int(frac);
    Int128 scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int128 num = Int128(w) * scale + f;
    if (negative) num = -num;
    auto [n, d] = reduce(num, scale);
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  return Rational(parse_int(text));
}

std::string Rational::str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-Int128(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  auto [n, d] = reduce(Int128(num_) * o.den_ + Int128(o.num_) * den_, Int128(den_) * o.den_);
  num_ = n;
  den_ = d;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  auto [n, d] = reduce(Int128(num_) * o.den_ - Int128(o.num_) * den_, Int128(den_) * o.den_);
  num_ = n;
  den_ = d;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  auto [n, d] = reduce(Int128(num_) * o.num_, Int128(den_) * o.den_);
  num_ = n;
  den_ = d;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::invalid_argument("Rational: division by zero");
  auto [n, d] = reduce(Int128(num_) * o.den_, Int128(den_) * o.num_);
  num_ = n;
  den_ = d;
  return *this;
}

bool operator<(const Rational& a, const Rational& b) {
  return Int128(a.num_) * b.den_ < Int128(b.num_) * a.den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace homc
