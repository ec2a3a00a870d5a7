#pragma once

#include "locdim/rational.hpp"

#include <compare>
#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace locdim {

class Element;

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Q[rho] for a real root rho in (0,1) of an irreducible integer polynomial.
///
/// The root is pinned by a rational isolating interval that is refined
/// lazily whenever an ordering question needs more precision.
class Field : public std::enable_shared_from_this<Field> {
 public:
  /// `min_poly` holds integer coefficients in ascending degree order.
  static std::shared_ptr<const Field> create(const std::vector<Integer>& min_poly, const Rational& lo,
                                             const Rational& hi);
  /// Degree-one field with rho = value.
  static std::shared_ptr<const Field> rational(const Rational& value);

  std::size_t degree() const { return monic_.size() - 1; }
  /// Monic rational minimal polynomial, ascending.
  const std::vector<Rational>& monic() const { return monic_; }
  /// Integer primitive form of the minimal polynomial, ascending, positive leading term.
  const std::vector<Integer>& integer_poly() const { return int_poly_; }

  std::pair<Rational, Rational> interval() const;
  /// Bisects until the isolating interval is narrower than `width`.
  void refine_to(const Rational& width) const;

  long double approx() const { return approx_; }

  Element zero() const;
  Element one() const;
  Element gen() const;
  Element from(const Rational& q) const;
  Element from_coeffs(std::vector<Rational> coeffs) const;

  /// Reduces an arbitrary-length polynomial in rho to the canonical representative.
  std::vector<Rational> reduce(std::vector<Rational> poly) const;

  /// Sign of the real value of the element; exact.
  int sign(const Element& x) const;

  bool same_as(const Field& other) const;

 private:
  Field() = default;
  int sign_by_interval(const std::vector<Rational>& c) const;

  std::vector<Rational> monic_;
  std::vector<Integer> int_poly_;
  std::vector<std::vector<Rational>> power_table_;  // rho^(n+i) reduced, i = 0..n-2
  mutable std::mutex mu_;
  mutable Rational lo_, hi_;
  long double approx_ = 0;
  long double approx_err_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Canonical element of Q[rho]: coefficients of 1, rho, ..., rho^(n-1).
class Element {
 public:
  Element() = default;
  Element(FieldPtr f, std::vector<Rational> coeffs);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Value as a rational; throws unless is_rational().
  Rational rational_value() const;
  std::optional<Integer> integer_value() const;

  long double approx() const;
  int sign() const { return field_->sign(*this); }

  Element operator-() const;
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Element& o);
  Element& operator/=(const Element& o);
  Element& operator*=(const Rational& q);
  Element inverse() const;

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const Element& b) { return a *= b; }
  friend Element operator/(Element a, const Element& b) { return a /= b; }
  friend Element operator*(Element a, const Rational& q) { return a *= q; }
  friend Element operator+(Element a, const Rational& q) { return a += a.field_->from(q); }
  friend Element operator-(Element a, const Rational& q) { return a -= a.field_->from(q); }

  /// Exact structural equality (canonical forms).
  friend bool operator==(const Element& a, const Element& b) { return a.c_ == b.c_; }
  /// Real-value ordering.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

  /// Lexicographic order on coefficients; cheap key order for maps.
  static bool structural_less(const Element& a, const Element& b);

  /// Human-readable polynomial in r, e.g. "2 - 2*r".
  std::string str() const;

 private:
  void check_same(const Element& o) const;
  FieldPtr field_;
  std::vector<Rational> c_;
};

enum class Ordering { less, equal, greater };
Ordering nf_cmp(const Element& x, const Element& y);

enum class OpKind { add, sub, mul, div };
Element nf_arith(const Element& x, const Element& y, OpKind op);

struct ElementKeyLess {
  bool operator()(const Element& a, const Element& b) const { return Element::structural_less(a, b); }
  bool operator()(const std::vector<Element>& a, const std::vector<Element>& b) const;
};

// ---------------------------------------------------------------- polynomials

using RatPoly = std::vector<Rational>;  // ascending

RatPoly poly_trim(RatPoly p);
RatPoly poly_rem(const RatPoly& a, const RatPoly& b);
RatPoly poly_gcd(RatPoly a, RatPoly b);
RatPoly poly_derivative(const RatPoly& p);
Rational poly_eval(const RatPoly& p, const Rational& x);
/// Number of distinct real roots in the half-open interval (lo, hi].
int sturm_count(const RatPoly& p, const Rational& lo, const Rational& hi);

// -------------------------------------------------------------------- roots

struct RootDisk {
  std::complex<double> center;
  double radius = 0;
};

/// Certified inclusion disks for all complex roots of an integer polynomial.
/// Disks are pairwise disjoint when `separated` is true, so each holds one root.
struct RootEnclosure {
  std::vector<RootDisk> disks;
  bool separated = false;
  unsigned bits = 0;
};

RootEnclosure enclose_roots(const std::vector<Integer>& poly, unsigned bits);

// -------------------------------------------------------------------- Pisot

enum class PisotStatus { pisot, not_pisot, undecided };
std::string to_string(PisotStatus s);

struct PisotOptions {
  double margin = 1e-12;
  unsigned max_bits = 256;
};

struct PisotCertificate {
  PisotStatus status = PisotStatus::undecided;
  std::string reason;
  std::vector<RootDisk> roots;
  unsigned bits = 0;
};

PisotCertificate nf_is_pisot(const std::vector<Integer>& poly, const PisotOptions& opt = {});

/// Integer polynomial of beta = 1/rho (reversed coefficients).
std::vector<Integer> inverse_poly(const Field& f);

/// Lower bound c > 0 such that distinct elements of sum_j s_j beta^j (s_j in S)
/// differ by more than c. Throws FieldError unless 1/rho is Pisot.
Rational nf_separation_bound(const std::vector<Element>& S, const PisotOptions& opt = {});

}  // namespace locdim
