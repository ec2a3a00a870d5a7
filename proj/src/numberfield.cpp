#include "locdim/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace locdim {

namespace mp = boost::multiprecision;

// ----------------------------------------------------------- polynomials

RatPoly poly_trim(RatPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

RatPoly poly_rem(const RatPoly& a, const RatPoly& b) {
  RatPoly r = poly_trim(a);
  RatPoly d = poly_trim(b);
  if (d.empty()) throw FieldError("polynomial division by zero");
  while (r.size() >= d.size()) {
    Rational f = r.back() / d.back();
    std::size_t shift = r.size() - d.size();
    for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= f * d[i];
    r.pop_back();
    r = poly_trim(std::move(r));
  }
  return r;
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!b.empty()) {
    RatPoly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

RatPoly poly_derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  return poly_trim(d);
}

Rational poly_eval(const RatPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain{poly_trim(p), poly_derivative(p)};
  while (!chain.back().empty()) {
    RatPoly r = poly_rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  chain.pop_back();
  return chain;
}

int sign_changes(const std::vector<RatPoly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = sgn(poly_eval(q, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int sturm_count(const RatPoly& p, const Rational& lo, const Rational& hi) {
  auto chain = sturm_chain(p);
  return sign_changes(chain, lo) - sign_changes(chain, hi);
}

// ----------------------------------------------------------------- Field

namespace {

std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  return out;
}

bool has_rational_root(const std::vector<Integer>& p) {
  // Divisor enumeration only for modest coefficients; larger inputs rely on
  // the refinement cap in sign() to flag reducibility.
  Integer lim = 1'000'000;
  if (mp::abs(p.front()) > lim || mp::abs(p.back()) > lim) return false;
  RatPoly rp(p.begin(), p.end());
  for (const auto& a : divisors(p.front()))
    for (const auto& b : divisors(p.back()))
      for (int s : {1, -1})
        if (poly_eval(rp, Rational(a * s, b)) == 0) return true;
  return false;
}

}  // namespace

std::shared_ptr<const Field> Field::create(const std::vector<Integer>& min_poly, const Rational& lo,
                                           const Rational& hi) {
  std::vector<Integer> p = min_poly;
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.size() < 2) throw FieldError("minimal polynomial must have degree >= 1");
  if (p.front() == 0) throw FieldError("minimal polynomial has root 0");
  Integer g = 0;
  for (const auto& c : p) g = mp::gcd(g, c);
  for (auto& c : p) c /= g;
  if (p.back() < 0)
    for (auto& c : p) c = -c;

  std::shared_ptr<Field> f(new Field());
  f->int_poly_ = p;
  for (const auto& c : p) f->monic_.push_back(Rational(c, p.back()));
  const RatPoly& m = f->monic_;

  if (poly_gcd(m, poly_derivative(m)).size() > 1) throw FieldError("minimal polynomial is not squarefree");
  if (f->degree() > 1 && has_rational_root(p)) throw FieldError("minimal polynomial has a rational root");
  if (!(lo >= 0 && lo < hi && hi <= 1)) throw FieldError("isolating interval must satisfy 0 <= lo < hi <= 1");
  if (poly_eval(m, hi) == 0) throw FieldError("isolating interval endpoint is a root");
  if (sturm_count(m, lo, hi) != 1) throw FieldError("isolating interval must contain exactly one root");

  if (f->degree() == 1) {
    f->lo_ = f->hi_ = -m[0];
    if (!(f->lo_ > 0 && f->lo_ < 1)) throw FieldError("rho must lie in (0,1)");
  } else {
    f->lo_ = lo;
    f->hi_ = hi;
    f->refine_to(Rational(1, Integer(1) << 90));
  }
  long double a = static_cast<long double>(((f->lo_ + f->hi_) / 2).convert_to<double>());
  // Correct the double rounding with one long-double residual step.
  Rational mid = (f->lo_ + f->hi_) / 2;
  Rational resid = mid - rational_from_double(static_cast<double>(a));
  f->approx_ = a + static_cast<long double>(resid.convert_to<double>());
  f->approx_err_ = static_cast<long double>((f->hi_ - f->lo_).convert_to<double>()) +
                   std::ldexp(1.0L, -100);
  return f;
}

std::shared_ptr<const Field> Field::rational(const Rational& value) {
  if (!(value > 0 && value < 1)) throw FieldError("rho must lie in (0,1)");
  std::vector<Integer> p{-numer(value), denom(value)};
  return create(p, 0, 1);
}

std::pair<Rational, Rational> Field::interval() const {
  std::lock_guard lock(mu_);
  return {lo_, hi_};
}

void Field::refine_to(const Rational& width) const {
  std::lock_guard lock(mu_);
  if (degree() == 1) return;
  int s_lo = sgn(poly_eval(monic_, lo_));
  if (s_lo == 0) throw FieldError("minimal polynomial vanishes at a rational point");
  while (hi_ - lo_ > width) {
    Rational mid = (lo_ + hi_) / 2;
    int s = sgn(poly_eval(monic_, mid));
    if (s == 0) throw FieldError("minimal polynomial vanishes at a rational point");
    if (s == s_lo)
      lo_ = mid;
    else
      hi_ = mid;
  }
}

Element Field::zero() const { return Element(shared_from_this(), std::vector<Rational>(degree(), 0)); }
Element Field::one() const { return from(1); }
Element Field::gen() const {
  if (degree() == 1) return from(-monic_[0]);
  std::vector<Rational> c(degree(), 0);
  c[1] = 1;
  return Element(shared_from_this(), c);
}
Element Field::from(const Rational& q) const {
  std::vector<Rational> c(degree(), 0);
  c[0] = q;
  return Element(shared_from_this(), c);
}
Element Field::from_coeffs(std::vector<Rational> coeffs) const {
  return Element(shared_from_this(), reduce(std::move(coeffs)));
}

std::vector<Rational> Field::reduce(std::vector<Rational> poly) const {
  const std::size_t n = degree();
  if (n == 1) {
    // Evaluate directly: rho is rational.
    Rational r = -monic_[0];
    Rational v = poly_eval(poly, r);
    return {v};
  }
  for (std::size_t i = poly.size(); i-- > n;) {
    Rational c = poly[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j < n; ++j) poly[i - n + j] -= c * monic_[j];
    poly[i] = 0;
  }
  poly.resize(n, 0);
  return poly;
}

bool Field::same_as(const Field& other) const { return this == &other || monic_ == other.monic_; }

int Field::sign(const Element& x) const {
  const auto& c = x.coeffs();
  if (degree() == 1) return sgn(c[0]);
  bool all_zero = std::all_of(c.begin(), c.end(), [](const Rational& q) { return q == 0; });
  if (all_zero) return 0;

  // Long-double evaluation with a rigorous a-priori error bound.
  constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
  constexpr long double eps_d = std::numeric_limits<double>::epsilon();
  long double val = 0, bound = 0, pw = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    long double ci = static_cast<long double>(c[i].convert_to<double>());
    long double a = std::fabs(ci);
    val += ci * pw;
    bound += a * (static_cast<long double>(i) * approx_err_ + pw * (eps_d + (3 * i + 4) * eps_ld));
    pw *= approx_;
  }
  if (std::isfinite(val) && std::fabs(val) > 4 * bound && bound < 1e300L) return val > 0 ? 1 : -1;
  return sign_by_interval(c);
}

int Field::sign_by_interval(const std::vector<Rational>& c) const {
  for (int round = 0; round < 64; ++round) {
    auto [lo, hi] = interval();
    Rational sum_lo = 0, sum_hi = 0, plo = 1, phi = 1;
    for (const auto& ci : c) {
      if (ci >= 0) {
        sum_lo += ci * plo;
        sum_hi += ci * phi;
      } else {
        sum_lo += ci * phi;
        sum_hi += ci * plo;
      }
      plo *= lo;
      phi *= hi;
    }
    if (sum_lo > 0) return 1;
    if (sum_hi < 0) return -1;
    refine_to((hi - lo) / (Integer(1) << 32));
  }
  throw FieldError("sign undecided after refinement cap; minimal polynomial may be reducible");
}

// --------------------------------------------------------------- Element

Element::Element(FieldPtr f, std::vector<Rational> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
  if (!field_) throw FieldError("element without field");
  if (c_.size() != field_->degree()) c_ = field_->reduce(std::move(c_));
}

void Element::check_same(const Element& o) const {
  if (field_.get() != o.field_.get() && !field_->same_as(*o.field_))
    throw FieldError("elements belong to different fields");
}

bool Element::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

bool Element::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return q == 0; });
}

Rational Element::rational_value() const {
  if (!is_rational()) throw FieldError("element is irrational: " + str());
  return c_[0];
}

std::optional<Integer> Element::integer_value() const {
  if (!is_rational() || denom(c_[0]) != 1) return std::nullopt;
  return numer(c_[0]);
}

long double Element::approx() const {
  long double v = 0, pw = 1;
  for (const auto& ci : c_) {
    v += static_cast<long double>(ci.convert_to<double>()) * pw;
    pw *= field_->approx();
  }
  return v;
}

Element Element::operator-() const {
  Element r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

Element& Element::operator+=(const Element& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Element& Element::operator-=(const Element& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Element& Element::operator*=(const Rational& q) {
  for (auto& c : c_) c *= q;
  return *this;
}

Element& Element::operator*=(const Element& o) {
  check_same(o);
  const std::size_t n = c_.size();
  if (n == 1) {
    c_[0] *= o.c_[0];
    return *this;
  }
  std::vector<Rational> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
  }
  c_ = field_->reduce(std::move(prod));
  return *this;
}

Element Element::inverse() const {
  if (is_zero()) throw FieldError("division by zero");
  const std::size_t n = c_.size();
  if (n == 1) return Element(field_, {1 / c_[0]});
  // Extended Euclid: find u with u * a = 1 mod m.
  RatPoly r0 = field_->monic(), r1 = poly_trim(c_);
  RatPoly s0{0}, s1{1};
  while (r1.size() > 1) {
    RatPoly q(r0.size() - r1.size() + 1, 0);
    RatPoly r = r0;
    while (r.size() >= r1.size()) {
      Rational f = r.back() / r1.back();
      std::size_t shift = r.size() - r1.size();
      q[shift] = f;
      for (std::size_t i = 0; i < r1.size(); ++i) r[shift + i] -= f * r1[i];
      r.pop_back();
      r = poly_trim(std::move(r));
    }
    RatPoly qs(q.size() + s1.size() - 1, 0);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
    RatPoly s2 = s0;
    if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
    for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = poly_trim(std::move(s2));
  }
  if (r1.empty()) throw FieldError("element not invertible; minimal polynomial reducible?");
  Rational k = r1[0];
  for (auto& c : s1) c /= k;
  return Element(field_, field_->reduce(std::move(s1)));
}

Element& Element::operator/=(const Element& o) {
  check_same(o);
  return *this *= o.inverse();
}

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Element::structural_less(const Element& a, const Element& b) {
  return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
}

std::string Element::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const Rational& q = c_[i];
    if (q == 0) continue;
    Rational a = q < 0 ? Rational(-q) : q;
    if (first)
      os << (q < 0 ? "-" : "");
    else
      os << (q < 0 ? " - " : " + ");
    first = false;
    if (i == 0) {
      os << to_string(a);
      continue;
    }
    if (a != 1) os << to_string(a) << "*";
    os << "r";
    if (i > 1) os << "^" << i;
  }
  if (first) return "0";
  return os.str();
}

bool ElementKeyLess::operator()(const std::vector<Element>& a, const std::vector<Element>& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), Element::structural_less);
}

Ordering nf_cmp(const Element& x, const Element& y) {
  auto o = x <=> y;
  if (o < 0) return Ordering::less;
  if (o > 0) return Ordering::greater;
  return Ordering::equal;
}

Element nf_arith(const Element& x, const Element& y, OpKind op) {
  switch (op) {
    case OpKind::add: return x + y;
    case OpKind::sub: return x - y;
    case OpKind::mul: return x * y;
    case OpKind::div: return x / y;
  }
  throw FieldError("unknown operation");
}

std::vector<Integer> inverse_poly(const Field& f) {
  std::vector<Integer> p(f.integer_poly().rbegin(), f.integer_poly().rend());
  if (p.back() < 0)
    for (auto& c : p) c = -c;
  return p;
}

}  // namespace locdim
