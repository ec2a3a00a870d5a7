#include "doctest.h"

#include "locdim/numberfield.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace locdim;

namespace {

FieldPtr golden() { return Field::create({-1, 1, 1}, 0, 1); }

std::vector<Integer> ints(std::initializer_list<int> c) { return {c.begin(), c.end()}; }

}  // namespace

TEST_SUITE("numberfield") {
  TEST_CASE("golden relation reduces exactly") {
    auto f = golden();
    Element r = f->gen();
    CHECK(r * r + r == f->one());
    CHECK((r - r).is_zero());
    // 1/rho = rho + 1 in this field.
    CHECK(r.inverse() == r + Rational(1));
    CHECK((f->one() - r) * r.inverse() == r);
  }

  TEST_CASE("ordering matches floating values") {
    auto f = golden();
    Element r = f->gen();
    CHECK(nf_cmp(r * Rational(2), f->one()) == Ordering::greater);
    CHECK(nf_cmp(f->one() - r, r * r) == Ordering::equal);
    auto q = Field::rational(Rational(1, 4));
    CHECK(nf_cmp(q->from(Rational(3, 5)), q->from(Rational(6, 10))) == Ordering::equal);

    // Random small-coefficient elements: sign agrees with double evaluation
    // whenever the value is not tiny.
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-20, 20);
    const double rho = (std::sqrt(5.0) - 1) / 2;
    for (int i = 0; i < 500; ++i) {
      int a = coef(rng), b = coef(rng), c = coef(rng);
      Element x = f->from_coeffs({Rational(a, 3), Rational(b, 7)}) - f->from(Rational(c, 5));
      double v = a / 3.0 + b / 7.0 * rho - c / 5.0;
      if (std::fabs(v) < 1e-9) continue;
      CHECK(x.sign() == (v > 0 ? 1 : -1));
    }
  }

  TEST_CASE("field axioms on random elements") {
    auto f = golden();
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-9, 9);
    auto draw = [&] { return f->from_coeffs({Rational(coef(rng), 1 + std::abs(coef(rng))), Rational(coef(rng))}); };
    for (int i = 0; i < 100; ++i) {
      Element a = draw(), b = draw(), c = draw();
      CHECK(a + b == b + a);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b) * c == a * (b * c));
      if (!a.is_zero()) CHECK(a * a.inverse() == f->one());
    }
  }

  TEST_CASE("reduction is idempotent") {
    auto f = golden();
    auto once = f->reduce({1, 2, 3, 4, 5});
    CHECK(f->reduce(once) == once);
  }

  TEST_CASE("creation rejects bad isolating intervals") {
    CHECK_THROWS_AS(Field::create({-1, 1, 1}, -2, 1), FieldError);
    CHECK_THROWS_AS(Field::create({-1, 0, 1}, 0, 1), FieldError);  // x^2 - 1 has no root in (0,1)
  }

  TEST_CASE("sturm counts") {
    RatPoly p{-2, 0, 1};  // x^2 - 2
    CHECK(sturm_count(p, 0, 2) == 1);
    CHECK(sturm_count(p, -2, 2) == 2);
    CHECK(sturm_count(p, 2, 3) == 0);
  }

  TEST_CASE("pisot examples") {
    CHECK(nf_is_pisot(ints({-1, -1, 1})).status == PisotStatus::pisot);
    CHECK(nf_is_pisot(ints({-4, 1})).status == PisotStatus::pisot);
    CHECK(nf_is_pisot(ints({-6, -1, 1})).status == PisotStatus::not_pisot);
    CHECK(nf_is_pisot(ints({-1, -1, 0, 1})).status == PisotStatus::pisot);  // plastic number
    CHECK(nf_is_pisot(ints({-2, 0, 1})).status == PisotStatus::not_pisot);  // sqrt 2 has conjugate -sqrt 2
    CHECK(inverse_poly(*golden()) == ints({-1, -1, 1}));
  }

  TEST_CASE("root enclosures contain the roots") {
    auto enc = enclose_roots(ints({-6, -1, 1}), 64);
    REQUIRE(enc.disks.size() == 2);
    std::set<long> centers;
    for (const auto& d : enc.disks) {
      CHECK(d.radius < 1e-9);
      centers.insert(std::lround(d.center.real()));
    }
    CHECK(centers == std::set<long>{-2, 3});
  }

  TEST_CASE("separation bound is sound") {
    auto f = golden();
    Element m1 = f->from(Rational(-1)), z = f->zero(), p1 = f->one();
    Rational c = nf_separation_bound({m1, z, p1});
    CHECK(c > 0);
    CHECK(c <= Rational(381966, 1000000));

    // Exhaustive check: nonzero signed beta-polynomials of degree <= 9 exceed c.
    const double beta = (1 + std::sqrt(5.0)) / 2;
    double smallest = 1e9;
    int total = 1;
    for (int i = 0; i < 10; ++i) total *= 3;
    for (int w = 0; w < total; ++w) {
      double v = 0, pw = 1;
      int rest = w;
      for (int i = 0; i < 10; ++i, pw *= beta) {
        v += (rest % 3 - 1) * pw;
        rest /= 3;
      }
      if (std::fabs(v) > 1e-9) smallest = std::min(smallest, std::fabs(v));
    }
    CHECK(smallest > c.convert_to<double>());

    auto q = Field::rational(Rational(1, 4));
    CHECK(nf_separation_bound({q->from(-1), q->zero(), q->one()}) == 1);
    CHECK(nf_separation_bound({f->zero()}) == 1);
  }
}
