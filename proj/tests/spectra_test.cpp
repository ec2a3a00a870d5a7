#include "doctest.h"

#include "locdim/spectra.hpp"

#include <cmath>
#include <random>

using namespace locdim;

namespace {

RatMatrix rat(std::initializer_list<std::initializer_list<long>> rows) {
  RatMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

RatMatrix random_nonneg(std::mt19937& rng, int rows, int cols) {
  std::uniform_int_distribution<int> v(0, 5);
  RatMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Rational(v(rng), 1 + v(rng));
  return m;
}

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("norms of displayed matrices") {
    RatMatrix t = rat({{1, 0, 0, 0}, {100, 100, 1000, 1000}, {0, 100, 0, 0}, {1, 0, 0, 100}});
    CHECK(sum_norm(t) == 2402);
    RatMatrix col = rat({{1}, {2}, {1}});
    CHECK(min_col_sum(col) == 4);
    CHECK(max_col_sum(t) == 1100);
    CHECK(min_row_sum(t) == 1);
    CHECK(min_col_sum_on(t, {1, 3}) == 100);
  }

  TEST_CASE("min column sum is supermultiplicative") {
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
      RatMatrix a = random_nonneg(rng, 3, 4), b = random_nonneg(rng, 4, 2);
      CHECK(min_col_sum(RatMatrix(a * b)) >= min_col_sum(a) * min_col_sum(b));
      CHECK(max_col_sum(RatMatrix(a * b)) <= max_col_sum(a) * max_col_sum(b));
    }
  }

  TEST_CASE("path products check dimensions") {
    RatMatrix a = rat({{1, 2}}), b = rat({{1}, {1}});
    CHECK(path_product<Rational>({a, b})(0, 0) == 3);
    CHECK(path_product<Rational>({rat({{1}}), a}) == a);
    CHECK_THROWS_AS(path_product<Rational>({b, b}), SpectraError);
  }

  TEST_CASE("scaled integer round trip") {
    RatMatrix m(1, 2);
    m << Rational(1, 4), Rational(1, 2);
    IntMatrix s = to_scaled(m, 4);
    CHECK(s(0, 0) == 1);
    CHECK(from_scaled(s, 4) == m);
    CHECK_THROWS_AS(to_scaled(m, 3), SpectraError);
  }

  TEST_CASE("spectral radius brackets") {
    auto one = spectral_radius(rat({{1}}));
    CHECK(one.lo == 1);
    CHECK(one.hi == 1);
    auto perm = spectral_radius(rat({{0, 1}, {1, 0}}));
    CHECK(perm.ok);
    CHECK(perm.lo <= 1);
    CHECK(perm.hi >= 1);
    CHECK(perm.width() <= Rational(1, Integer(1) << 40));

    RatMatrix t = rat({{0, 100, 100}, {100, 0, 100}, {0, 1, 0}});
    auto br = spectral_radius(t);
    REQUIRE(br.ok);
    const double want = 50 + std::sqrt(2600.0);  // root of x^2 - 100x - 100
    CHECK(br.lo.convert_to<double>() <= want + 1e-9);
    CHECK(br.hi.convert_to<double>() >= want - 1e-9);
    CHECK(br.mid() == doctest::Approx(100.9901951).epsilon(1e-9));
  }

  TEST_CASE("bracket agrees with eigen estimate on random matrices") {
    std::mt19937 rng(5);
    for (int i = 0; i < 30; ++i) {
      RatMatrix m = random_nonneg(rng, 4, 4);
      auto br = spectral_radius(m);
      double est = spectral_radius_estimate(to_double(m));
      CHECK(br.lo.convert_to<double>() <= est + 1e-9);
      CHECK(br.hi.convert_to<double>() >= est - 1e-9);
    }
  }

  TEST_CASE("characteristic polynomial") {
    RatPoly p = char_poly(rat({{0, 100, 100}, {100, 0, 100}, {0, 1, 0}}));
    // The Perron root of x^2 - 100x - 100 is a root of det(xI - M).
    Rational r = rational_from_double(50 + std::sqrt(2600.0));
    CHECK(std::fabs(poly_eval(p, r).convert_to<double>()) < 1e-6);
    CHECK(char_poly(rat({{2, 0}, {0, 3}})) == RatPoly{6, -5, 1});
  }

  TEST_CASE("spectral comparison") {
    RatMatrix a = rat({{4}}), b = rat({{2}});
    CHECK(compare_spectral(a, 2, b, 1) == SpectralOrder::equal);
    CHECK(compare_spectral(a, 1, b, 1) == SpectralOrder::greater);
    CHECK(compare_spectral(b, 1, a, 1) == SpectralOrder::less);
    RatMatrix golden = rat({{1, 1}, {1, 0}});
    CHECK(compare_spectral(golden, 1, golden, 1) == SpectralOrder::equal);
    CHECK(compare_spectral(matrix_power(golden, 3), 3, golden, 1) == SpectralOrder::equal);
    RatMatrix tiny(1, 1);
    tiny(0, 0) = Rational(1, Integer(1) << 200);
    RatMatrix tinier(1, 1);
    tinier(0, 0) = tiny(0, 0) * Rational(2, 3);
    CHECK(compare_spectral(tinier, 1, tiny, 1) == SpectralOrder::less);
    CHECK(root_le(Rational(8), 3, Rational(2), 1));
    CHECK_FALSE(root_le(Rational(9), 3, Rational(2), 1));
  }
}
