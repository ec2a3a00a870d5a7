#include "locdim/dims.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace locdim {

namespace {

Element frac_part(const Element& x) {
  Integer q{static_cast<long long>(std::floor(x.approx()))};
  Element one = x.field()->one();
  Element t = x - Rational(q);
  while (t.sign() < 0) t += one;
  while ((t - one).sign() >= 0) t -= one;
  return t;
}

using Row = Mat<Rational>;

Row weights(const TransitionDiagram& d, const std::vector<int>& path) {
  Row q = Row::Ones(1, d.root_width());
  for (int e : path) q = (q * d.edges[e].matrix).eval();
  return q;
}

// Neighbouring level-n interval on one side, or nothing at the end of the line.
std::optional<std::vector<int>> adjacent(const TransitionDiagram& d, const std::vector<int>& path, bool right) {
  const int n = static_cast<int>(path.size());
  auto sibling_step = [&](int node) -> std::optional<int> {
    if (d.out[node].empty()) return std::nullopt;
    return right ? d.out[node].front() : d.out[node].back();
  };
  std::vector<int> out;
  int k = n - 1;
  for (; k >= 0; --k) {
    const auto& kids = d.out[d.edges[path[k]].parent];
    auto it = std::find(kids.begin(), kids.end(), path[k]);
    std::size_t pos = static_cast<std::size_t>(it - kids.begin());
    if (right ? pos + 1 < kids.size() : pos > 0) {
      out.assign(path.begin(), path.begin() + k);
      out.push_back(kids[right ? pos + 1 : pos - 1]);
      break;
    }
  }
  if (k < 0) {
    if (d.spec.mode == Mode::line) return std::nullopt;
    // The torus closes up: the far end of level n is adjacent.
    out.clear();
    auto s = sibling_step(d.root);
    if (!s) return std::nullopt;
    out.push_back(*s);
  }
  while (static_cast<int>(out.size()) < n) {
    auto s = sibling_step(d.edges[out.back()].child);
    if (!s) return std::nullopt;
    out.push_back(*s);
  }
  return out;
}

struct State {
  int node;
  Element t;
  std::vector<int> edges;
  std::vector<std::pair<int, Element>> trail;  // (node, position) before each step
};

}  // namespace

PointResult point_symbolic(const TransitionDiagram& d, const Element& x, int depth) {
  if (!d.has_matrices()) throw DimsError("point estimates need probabilities");
  if (depth < 1) throw DimsError("depth must be positive");
  if (d.truncated) throw DimsError("point estimates need a complete transition diagram");
  const MeasureSpec& s = d.spec;
  const Element& rho = s.rho;
  std::vector<State> states;
  if (s.mode == Mode::torus) {
    Element t = frac_part(x);
    states.push_back({d.root, t, {}, {}});
    if (t.is_zero()) states.push_back({d.root, s.field->one(), {}, {}});
  } else {
    if (x.sign() < 0 || (x - s.delta).sign() > 0) throw DimsError("x = " + x.str() + " lies outside the support hull");
    states.push_back({d.root, x, {}, {}});
  }

  for (int step = 0; step < depth; ++step) {
    std::vector<State> next;
    for (const State& st : states) {
      for (int e : d.out[st.node]) {
        const ChildEdge& edge = d.edges[e];
        if ((st.t - edge.left).sign() < 0 || (st.t - edge.right).sign() > 0) continue;
        State c{edge.child, (st.t - edge.left) / rho, st.edges, st.trail};
        c.edges.push_back(e);
        c.trail.emplace_back(st.node, st.t);
        next.push_back(std::move(c));
      }
    }
    if (next.empty()) throw DimsError("x = " + x.str() + " is not in the support");
    states = std::move(next);
  }

  PointResult res;
  res.boundary = states.size() > 1;
  const long double lr = log_rho(s);
  bool all_periodic = true;
  for (const State& st : states) {
    PointPath p;
    p.edges = st.edges;
    p.depth = depth;
    p.offset = st.t;
    Row q = weights(d, p.edges);
    Rational mass = sum_norm(q);
    p.estimate = log_rational(mass) / (depth * lr);
    Rational adj = mass;
    for (bool right : {false, true})
      if (auto a = adjacent(d, p.edges, right)) adj += sum_norm(weights(d, *a));
    p.estimate_adjacent = log_rational(adj) / (depth * lr);

    // First repeated (node, position) closes a cycle.
    std::map<std::pair<int, std::vector<Rational>>, int> seen;
    auto trail = st.trail;
    trail.emplace_back(st.node, st.t);
    for (int k = 0; k <= depth; ++k) {
      auto [it, fresh] = seen.try_emplace({trail[k].first, trail[k].second.coeffs()}, k);
      if (fresh) continue;
      p.preamble.assign(st.edges.begin(), st.edges.begin() + it->second);
      p.periodic = periodic_dim(d, std::vector<int>(st.edges.begin() + it->second, st.edges.begin() + k));
      break;
    }
    if (!p.periodic) all_periodic = false;
    res.paths.push_back(std::move(p));
  }

  res.exact = all_periodic;
  bool first = true;
  for (const auto& p : res.paths) {
    DimBracket b = res.exact ? p.periodic->dim : DimBracket{p.estimate, p.estimate};
    // Two representations: the smaller dimension wins.
    if (first || b.mid() < res.dim.mid()) res.dim = b;
    first = false;
  }
  return res;
}

}  // namespace locdim
