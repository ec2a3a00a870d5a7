#include "locdim/classes.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace locdim {

std::string to_string(ClassKind k) { return k == ClassKind::essential ? "essential" : "maximal-non-essential"; }

std::string to_string(Positivity p) {
  switch (p) {
    case Positivity::unknown: return "unknown";
    case Positivity::positive: return "positive";
    case Positivity::not_positive: return "not-positive";
    case Positivity::undecided: return "undecided-at-cap";
  }
  return "?";
}

bool LoopClass::contains(int node) const { return std::binary_search(nodes.begin(), nodes.end(), node); }

std::string LoopClass::label() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < reduced_labels.size(); ++i) os << (i ? ", " : "") << reduced_labels[i];
  os << "]";
  return os.str();
}

namespace {

// Iterative Tarjan; components come out in reverse topological order.
std::vector<std::vector<int>> tarjan(const TransitionDiagram& d) {
  const int n = static_cast<int>(d.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> comps;
  int counter = 0;
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int s = 0; s < n; ++s) {
    if (index[s] >= 0) continue;
    std::vector<Frame> call{{s, 0}};
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& out = d.out[f.v];
      if (f.next < out.size()) {
        int w = d.edges[out[f.next++]].child;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

}  // namespace

ClassReport loop_classes(const TransitionDiagram& d) {
  ClassReport r;
  r.from_truncated_diagram = d.truncated;
  r.membership.assign(d.size(), -1);
  auto comps = tarjan(d);
  std::vector<int> comp_of(d.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);

  for (std::size_t c = 0; c < comps.size(); ++c) {
    LoopClass lc;
    lc.nodes = comps[c];
    bool leaves = false;
    std::vector<int> internal_out(d.size(), 0);
    for (int v : lc.nodes)
      for (int e : d.out[v]) {
        if (comp_of[d.edges[e].child] == static_cast<int>(c)) {
          lc.internal_edges.push_back(e);
          ++internal_out[v];
        } else {
          leaves = true;
        }
      }
    if (lc.internal_edges.empty()) continue;  // no cycle
    // Unexpanded nodes of a truncated diagram cannot be certified closed.
    bool all_expanded = std::all_of(lc.nodes.begin(), lc.nodes.end(), [&](int v) { return d.expanded[v]; });
    lc.kind = (!leaves && all_expanded) ? ClassKind::essential : ClassKind::maximal_non_essential;
    lc.simple_cycle = lc.internal_edges.size() == lc.nodes.size() &&
                      std::all_of(lc.nodes.begin(), lc.nodes.end(), [&](int v) { return internal_out[v] == 1; });
    std::set<int> labels;
    for (int v : lc.nodes) labels.insert(d.reduced_id[v] + 1);
    lc.reduced_labels.assign(labels.begin(), labels.end());
    std::sort(lc.internal_edges.begin(), lc.internal_edges.end());
    r.classes.push_back(std::move(lc));
  }
  std::sort(r.classes.begin(), r.classes.end(),
            [](const LoopClass& a, const LoopClass& b) { return a.nodes.front() < b.nodes.front(); });
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    for (int v : r.classes[i].nodes) r.membership[v] = static_cast<int>(i);
    if (r.classes[i].kind == ClassKind::essential) ++r.essential_count;
  }

  // Reachability of other loop classes, for reporting the preorder.
  for (auto& lc : r.classes) {
    std::vector<bool> seen(d.size(), false);
    std::deque<int> q(lc.nodes.begin(), lc.nodes.end());
    for (int v : lc.nodes) seen[v] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e : d.out[v]) {
        int w = d.edges[e].child;
        if (seen[w]) continue;
        seen[w] = true;
        if (r.membership[w] >= 0 && r.classes[r.membership[w]].kind != ClassKind::essential)
          lc.reaches_other_loop_class = true;
        q.push_back(w);
      }
    }
  }
  return r;
}

namespace {

struct Pattern {
  int rows = 0, cols = 0;
  std::vector<std::uint8_t> bits;
  bool all_ones() const {
    return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
  }
};

Pattern support(const RatMatrix& m) {
  Pattern p{static_cast<int>(m.rows()), static_cast<int>(m.cols()), {}};
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) p.bits.push_back(m(i, j) > 0 ? 1 : 0);
  return p;
}

Pattern compose(const Pattern& a, const Pattern& b) {
  Pattern p{a.rows, b.cols, std::vector<std::uint8_t>(static_cast<std::size_t>(a.rows) * b.cols, 0)};
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k)
      if (a.bits[i * a.cols + k])
        for (int j = 0; j < b.cols; ++j)
          if (b.bits[k * b.cols + j]) p.bits[i * b.cols + j] = 1;
  return p;
}

}  // namespace

PositivityResult is_positive(const TransitionDiagram& d, const LoopClass& c, std::size_t cap) {
  PositivityResult res;
  if (!d.has_matrices() || c.internal_edges.empty()) return res;

  std::unordered_map<int, std::vector<int>> internal_from;
  std::unordered_map<int, Pattern> edge_support;
  for (int e : c.internal_edges) {
    internal_from[d.edges[e].parent].push_back(e);
    edge_support[e] = support(d.edges[e].matrix);
  }
  struct Triple {
    int start, end;
    Pattern pattern;
    int prev;  // index into `triples`, -1 for a single edge
    int edge;
  };
  std::vector<Triple> triples;
  std::set<std::tuple<int, int, std::vector<std::uint8_t>>> seen;
  std::deque<int> queue;

  auto finish = [&](int idx) {
    for (int t = idx; t >= 0; t = triples[t].prev) res.edges.push_back(triples[t].edge);
    std::reverse(res.edges.begin(), res.edges.end());
    res.status = Positivity::positive;
    res.explored = triples.size();
  };

  for (int e : c.internal_edges) {
    Triple t{d.edges[e].parent, d.edges[e].child, edge_support[e], -1, e};
    if (!seen.insert({t.start, t.end, t.pattern.bits}).second) continue;
    triples.push_back(std::move(t));
    if (triples.back().pattern.all_ones()) {
      finish(static_cast<int>(triples.size()) - 1);
      return res;
    }
    queue.push_back(static_cast<int>(triples.size()) - 1);
  }
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    for (int e : internal_from[triples[idx].end]) {
      Pattern p = compose(triples[idx].pattern, edge_support[e]);
      int start = triples[idx].start, end = d.edges[e].child;
      if (!seen.insert({start, end, p.bits}).second) continue;
      if (triples.size() >= cap) {
        res.status = Positivity::undecided;
        res.explored = triples.size();
        return res;
      }
      triples.push_back(Triple{start, end, std::move(p), idx, e});
      int ni = static_cast<int>(triples.size()) - 1;
      if (triples[ni].pattern.all_ones()) {
        finish(ni);
        return res;
      }
      queue.push_back(ni);
    }
  }
  res.status = Positivity::not_positive;
  res.explored = triples.size();
  return res;
}

bool row_nonzero_check(const TransitionDiagram& d, const LoopClass& c) {
  if (!d.has_matrices()) return false;
  return std::none_of(c.internal_edges.begin(), c.internal_edges.end(),
                      [&](int e) { return has_zero_row(d.edges[e].matrix); });
}

void annotate_classes(const TransitionDiagram& d, ClassReport& r, std::size_t cap) {
  for (auto& lc : r.classes) {
    auto pr = is_positive(d, lc, cap);
    lc.positivity = pr.status;
    lc.witness_edges = pr.edges;
    lc.row_nonzero = row_nonzero_check(d, lc);
  }
}

std::vector<int> path_labels(const TransitionDiagram& d, const std::vector<int>& edges) {
  std::vector<int> out;
  if (edges.empty()) return out;
  out.push_back(d.reduced_id[d.edges[edges.front()].parent] + 1);
  for (int e : edges) out.push_back(d.reduced_id[d.edges[e].child] + 1);
  return out;
}

}  // namespace locdim
