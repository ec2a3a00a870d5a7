#include "doctest.h"

#include "locdim/cantor.hpp"
#include "locdim/netgen.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace locdim;

namespace {

std::vector<int> full_digits(int k) {
  std::vector<int> l(k + 1);
  std::iota(l.begin(), l.end(), 0);
  return l;
}

}  // namespace

TEST_SUITE("cantor") {
  TEST_CASE("direct construction agrees with the transition diagram") {
    for (auto [d, k] : {std::pair{3, 3}, std::pair{3, 2}, std::pair{4, 4}}) {
      auto probs = binomial_probs(k);
      auto spec = spec_cantor(d, k, full_digits(k), probs);
      auto diagram = closure(spec);
      REQUIRE(diagram.reduced_count() == 1);
      auto w = digit_weights(k, full_digits(k), probs);
      // Every node is the same reduced vector; compare the root's ordered children.
      const auto& out = diagram.out[diagram.root];
      REQUIRE(out.size() == static_cast<std::size_t>(d));
      for (int l = 0; l < d; ++l) CHECK(diagram.edges[out[l]].matrix == cantor_T(d, k, w, l));
    }
  }

  TEST_CASE("displayed row of the d = 4, k = 7 example") {
    std::vector<Rational> distinct;
    for (int s = 0; s <= 7; ++s) distinct.push_back(Rational(s + 1, 36));
    auto t = cantor_T(4, 7, digit_weights(7, full_digits(7), distinct), 0);
    // Fourth row is (p4, 0, 0, p3, 0, 0, p2).
    std::vector<Rational> row{distinct[4], 0, 0, distinct[3], 0, 0, distinct[2]};
    for (int j = 0; j < 7; ++j) CHECK(t(3, j) == row[j]);
  }

  TEST_CASE("missing digits give zero entries") {
    auto w = digit_weights(7, {0, 1, 2, 4, 5, 6, 7}, binomial_probs(6));
    CHECK(w[3] == 0);
    auto t = cantor_T(4, 7, w, 0);
    CHECK(t(3, 3) == 0);
    CHECK(cantor_premise_holds(4, 7, full_digits(7)));
    CHECK_FALSE(cantor_premise_holds(4, 7, {0, 1, 2, 4, 5, 6, 7}));
  }

  TEST_CASE("block layout and permutation") {
    auto layout = block_layout(4, 7);
    CHECK(layout.sizes == std::vector<int>{3, 2, 2});
    CHECK(layout.order == std::vector<int>{0, 3, 6, 1, 4, 2, 5});
    auto w = digit_weights(7, full_digits(7), binomial_probs(7));
    for (int l = 0; l < 4; ++l) {
      auto t = cantor_T(4, 7, w, l);
      auto b = block_permute(t, layout);
      CHECK(block_unpermute(b) == t);
      REQUIRE(b.type());
      CHECK(*b.type() == l % 3);
    }
    auto b0 = block_permute(cantor_T(4, 7, w, 0), layout);
    CHECK(b0.block_diagonal());
    CHECK(b0.block(0, 0)(1, 2) == w[2]);
  }

  TEST_CASE("products add types") {
    const int d = 4, k = 7;
    auto w = digit_weights(k, full_digits(k), binomial_probs(k));
    auto layout = block_layout(d, k);
    auto t0 = block_permute(cantor_T(d, k, w, 0), layout);
    auto t3 = block_permute(cantor_T(d, k, w, 3), layout);
    auto p = block_product(t0, t3);
    REQUIRE(p.type());
    CHECK(*p.type() == 0);

    std::mt19937 rng(9);
    std::uniform_int_distribution<int> letter(0, d - 1);
    for (int trial = 0; trial < 20; ++trial) {
      auto acc = block_permute(RatMatrix::Identity(k, k), layout);
      int sum = 0;
      for (int i = 0; i < 5; ++i) {
        int l = letter(rng);
        sum += l;
        acc = block_product(acc, block_permute(cantor_T(d, k, w, l), layout));
      }
      REQUIRE(acc.type());
      CHECK(*acc.type() == sum % (d - 1));
    }
  }

  TEST_CASE("powers of the diagonal product are block positive") {
    const int d = 3, k = 3;
    auto w = digit_weights(k, full_digits(k), binomial_probs(k));
    auto layout = block_layout(d, k);
    auto p = block_product(block_permute(cantor_T(d, k, w, 0), layout),
                           block_permute(cantor_T(d, k, w, d - 1), layout));
    auto pk = block_power(p, k);
    CHECK(pk.block_diagonal());
    CHECK(pk.block_positive());
  }

  TEST_CASE("geometric-mean torus bounds") {
    auto bound = [](int m, int d, int depth) {
      // The m-fold convolution has digits 0..m, so k = m.
      auto w = digit_weights(m, full_digits(m), binomial_probs(m));
      return upper_bound_theta(d, m, w, depth).bound;
    };
    CHECK(std::fabs(bound(3, 3, 1) - 1.077324384L) < 1e-6L);
    CHECK(std::fabs(bound(4, 4, 1) - 1.166666667L) < 1e-6L);
    CHECK(std::fabs(bound(6, 3, 2) - 1.011259593L) < 1e-6L);
  }

  TEST_CASE("line sup-dimension closed form") {
    CHECK(std::fabs(bhm_sup_dim(3, 0).value - 1.133544891L) < 1e-6L);
    CHECK(std::fabs(bhm_sup_dim(3, 1).value - 1.058745493L) < 1e-6L);
    CHECK(std::fabs(bhm_sup_dim(10, 0).value - 2.441914915L) < 1e-6L);
    auto flagged = bhm_sup_dim(10, -1);
    CHECK(std::fabs(flagged.value - 2.709269961L) < 1e-6L);
    CHECK_FALSE(flagged.flags.empty());
    CHECK(bhm_sup_dim(3, 0).flags.empty());
    CHECK_FALSE(bhm_sup_dim(3, 2).flags.empty());
    CHECK_THROWS_AS(bhm_sup_dim(3, -2), CantorError);
  }

  TEST_CASE("table rows") {
    auto r22 = shrink_row(2, 3);
    CHECK_FALSE(r22.holds);
    CHECK(std::fabs(r22.line - 1.261859507L) < 1e-6L);
    CHECK(std::fabs(r22.torus - 1.261859507L) < 1e-6L);
    auto r33 = shrink_row(3, 3);
    CHECK(r33.holds);
    CHECK(r33.depth == 1);
    auto r104 = shrink_row(10, 4);
    CHECK(r104.holds);
    CHECK(r104.depth == 2);
    CHECK(std::fabs(r104.torus - 1.027211789L) < 1e-6L);
    CHECK_FALSE(r104.flags.empty());  // k = 6 lies past the derivation's range

    auto table = shrink_table({{3, 3}, {4, 3}});
    REQUIRE(table.size() == 2);
    CHECK(table[1].m == 4);
    CHECK(default_table_pairs().size() == 44);
  }
}
