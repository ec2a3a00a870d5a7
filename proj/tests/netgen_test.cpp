#include "doctest.h"

#include "support.hpp"

#include "locdim/cantor.hpp"

using namespace locdim;
using namespace locdim::testing;

namespace {

MeasureSpec middle_third() {
  auto f = Field::rational(Rational(1, 3));
  return spec_validate(RawSpec{f, {f->zero(), f->from(Rational(2, 3))}, {Rational(1, 2), Rational(1, 2)}, Mode::line})
      .spec;
}

}  // namespace

TEST_SUITE("netgen") {
  TEST_CASE("intersection oracle examples") {
    auto cantor = middle_third();
    KOracle k(cantor, 10000);
    const auto& f = *cantor.field;
    CHECK_FALSE(k.intersects(f.from(Rational(1, 3)), f.from(Rational(2, 3))));
    CHECK(k.intersects(f.from(Rational(1, 10)), f.from(Rational(1, 3))));
    CHECK(k.intersects(f.from(Rational(-1)), f.from(Rational(2))));

    auto five = load_fixture("two_essential.spec").spec;
    KOracle k5(five, 100000);
    CHECK_FALSE(k5.intersects(five.field->from(Rational(14, 5)), five.field->from(Rational(3))));
    CHECK(k5.intersects(five.field->from(Rational(1, 2)), five.field->from(Rational(3, 5))));

    auto full = spec_cantor(3, 3, {0, 1, 2, 3}, binomial_probs(3), Mode::line);
    KOracle kf(full, 10000);
    CHECK(kf.intersects(full.field->from(Rational(7, 5)), full.field->from(Rational(71, 50))));
  }

  TEST_CASE("golden torus root has five children") {
    auto d = diagram_of("golden.spec", Mode::torus);
    CHECK(d.out[d.root].size() == 5);
    std::set<int> reduced;
    for (int e : d.out[d.root]) reduced.insert(d.reduced_id[d.edges[e].child]);
    CHECK(reduced == std::set<int>{1, 2, 3, 4, 5});  // labels 2..6, 0-based
  }

  TEST_CASE("complete cantor-like root") {
    for (int dd : {3, 4}) {
      auto s = spec_cantor(dd, dd, [&] {
        std::vector<int> l;
        for (int j = 0; j <= dd; ++j) l.push_back(j);
        return l;
      }(), binomial_probs(dd));
      auto d = closure(s);
      CHECK(d.reduced_count() == 1);
      CHECK(d.out[d.root].size() == static_cast<std::size_t>(dd));
    }
  }

  TEST_CASE("strong separation node repeats itself") {
    auto v = load_fixture("separated.spec");
    auto d = closure(v.spec);
    // Root is (2, (0)) in line mode; its children all share its reduced form.
    REQUIRE(d.out[d.root].size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& e = d.edges[d.out[d.root][i]];
      CHECK(d.reduced_id[e.child] == d.reduced_id[d.root]);
      REQUIRE(e.matrix.rows() == 1);
      REQUIRE(e.matrix.cols() == 1);
      CHECK(e.matrix(0, 0) == v.spec.probs[i]);
    }
  }

  TEST_CASE("structure counts") {
    CHECK(diagram_of("two_essential.spec").reduced_count() == 10);
    CHECK(diagram_of("golden.spec", Mode::torus).reduced_count() == 38);
    CHECK(diagram_of("golden.spec", Mode::line).reduced_count() == 40);
    auto iso = diagram_of("isolated.spec");
    CHECK(iso.reduced_count() == 10);
    const auto& root = iso.nodes[iso.root];
    CHECK(root.length == iso.spec.field->one());
    CHECK(root.neighbours.size() == 2);  // torus root (1, (0, 1)) for delta = 2
  }

  TEST_CASE("children tile the parent on a full-support diagram") {
    auto d = diagram_of("golden.spec", Mode::torus);
    for (std::size_t v = 0; v < d.size(); ++v) {
      Element sum = d.spec.field->zero();
      for (int e : d.out[v]) sum += d.edges[e].right - d.edges[e].left;
      CHECK(sum == d.nodes[v].length);
    }
  }

  TEST_CASE("every edge matrix has a nonzero entry in each column") {
    for (const char* name : {"golden.spec", "isolated.spec", "cantor3.spec"}) {
      auto d = diagram_of(name);
      for (const auto& e : d.edges) CHECK_FALSE(has_zero_column(e.matrix));
    }
  }

  TEST_CASE("neighbour positions are sorted and inside the hull") {
    auto d = diagram_of("isolated.spec");
    for (const auto& cv : d.nodes) {
      for (std::size_t i = 0; i + 1 < cv.neighbours.size(); ++i) CHECK(cv.neighbours[i] < cv.neighbours[i + 1]);
      for (const auto& a : cv.neighbours) {
        CHECK(a.sign() >= 0);
        CHECK(a + cv.length <= d.spec.delta);
      }
    }
  }

  TEST_CASE("weight vectors match direct enumeration") {
    for (Mode m : {Mode::line, Mode::torus}) {
      auto d = diagram_of("golden.spec", m);
      for (int n = 1; n <= 3; ++n)
        for (const auto& li : enumerate_level(d, n)) {
          auto q = brute_force_q(d, li.left, li.node, n);
          for (std::size_t i = 0; i < q.size(); ++i) CHECK(q[i] == li.q(0, static_cast<Eigen::Index>(i)));
        }
    }
  }

  TEST_CASE("level lengths sum to the root length") {
    auto d = diagram_of("cantor3.spec");
    Element scale = d.spec.field->one();
    for (int n = 1; n <= 3; ++n) {
      scale *= d.spec.rho;
      Element total = d.spec.field->zero();
      for (const auto& li : enumerate_level(d, n)) total += d.nodes[li.node].length * scale;
      CHECK(total == d.nodes[d.root].length);
    }
  }

  TEST_CASE("caps truncate with a witness path") {
    Caps caps;
    caps.max_nodes = 25;
    auto d = diagram_of("golden.spec", Mode::torus, caps);
    CHECK(d.truncated);
    CHECK_FALSE(d.truncation_reason.empty());
    REQUIRE_FALSE(d.witness.empty());
    CHECK(d.witness.front() == d.root);
    caps = {};
    caps.max_depth = 2;
    CHECK(diagram_of("golden.spec", Mode::torus, caps).truncated);
  }

  TEST_CASE("oracle question cap truncates") {
    auto s = load_fixture("golden.spec").spec;
    KOracle k(s, 1);
    CHECK_THROWS_AS(k.intersects(s.field->from(Rational(1, 7)), s.field->from(Rational(1, 5))), OracleCapExceeded);
    ClosureOptions opt;
    opt.caps.max_questions = 2;
    auto d = closure(s, opt);
    CHECK(d.truncated);
    CHECK(d.truncation_reason.find("question cap") != std::string::npos);
  }
}
