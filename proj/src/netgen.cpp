#include "locdim/netgen.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace locdim {

namespace {

bool elements_less(const std::vector<Element>& a, const std::vector<Element>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), Element::structural_less);
}

}  // namespace

std::string CharVector::str() const {
  std::ostringstream os;
  os << "(" << length.str() << ", (";
  for (std::size_t i = 0; i < neighbours.size(); ++i) os << (i ? ", " : "") << neighbours[i].str();
  os << "), " << sibling << ")";
  return os.str();
}

bool ReducedLess::operator()(const ReducedVector& a, const ReducedVector& b) const {
  if (Element::structural_less(a.length, b.length)) return true;
  if (Element::structural_less(b.length, a.length)) return false;
  return elements_less(a.neighbours, b.neighbours);
}

bool CharLess::operator()(const CharVector& a, const CharVector& b) const {
  ReducedLess rl;
  ReducedVector ra = a.reduced(), rb = b.reduced();
  if (rl(ra, rb)) return true;
  if (rl(rb, ra)) return false;
  return a.sibling < b.sibling;
}

bool KOracle::KeyLess::operator()(const Key& a, const Key& b) const {
  if (Element::structural_less(a.first, b.first)) return true;
  if (Element::structural_less(b.first, a.first)) return false;
  return Element::structural_less(a.second, b.second);
}

KOracle::KOracle(const MeasureSpec& spec, std::size_t max_questions)
    : spec_(spec), beta_(spec.rho.inverse()), cap_(max_questions) {}

KOracle::Verdict KOracle::classify(Element& u, Element& v) const {
  // 0 and delta lie in K (fixed points of the extreme maps).
  if (!(u < v)) return Verdict::reject;
  if (v.sign() <= 0 || u >= spec_.delta) return Verdict::reject;
  if (u.sign() < 0 || v > spec_.delta) return Verdict::accept;
  return Verdict::open;
}

bool KOracle::intersects(const Element& u0, const Element& v0) {
  Element u = u0, v = v0;
  Verdict top = classify(u, v);
  if (top != Verdict::open) return top == Verdict::accept;
  Key start{u, v};
  if (auto it = memo_.find(start); it != memo_.end()) return it->second;

  std::set<Key, KeyLess> seen{start};
  std::vector<Key> stack{start};
  while (!stack.empty()) {
    Key q = std::move(stack.back());
    stack.pop_back();
    for (const auto& d : spec_.digits) {
      Element nu = (q.first - d) * beta_, nv = (q.second - d) * beta_;
      Verdict verdict = classify(nu, nv);
      if (verdict == Verdict::reject) continue;
      if (verdict == Verdict::accept) {
        memo_[start] = true;
        return true;
      }
      Key next{std::move(nu), std::move(nv)};
      if (auto it = memo_.find(next); it != memo_.end()) {
        if (it->second) {
          memo_[start] = true;
          return true;
        }
        continue;
      }
      if (seen.insert(next).second) {
        if (memo_.size() + seen.size() > cap_)
          throw OracleCapExceeded("K-intersection question cap of " + std::to_string(cap_) + " exceeded");
        stack.push_back(std::move(next));
      }
    }
  }
  // The reachable question set is closed and accepts nowhere.
  for (const auto& k : seen) memo_[k] = false;
  return false;
}

ReducedVector root_vector(const MeasureSpec& spec) {
  ReducedVector r;
  if (spec.mode == Mode::torus) {
    r.length = spec.field->one();
    auto delta = spec.delta.integer_value();
    for (Integer l = 0; l < *delta; ++l) r.neighbours.push_back(spec.field->from(Rational(l)));
  } else {
    r.length = spec.delta;
    r.neighbours.push_back(spec.field->zero());
  }
  return r;
}

std::vector<ChildCandidate> children(const MeasureSpec& spec, const ReducedVector& parent, KOracle& oracle) {
  const Element beta = spec.rho.inverse();
  const Element hull = spec.rho * spec.delta;
  const Element& L = parent.length;
  const Element zero = spec.field->zero();

  std::vector<Element> ends{zero, L};
  for (const auto& c : parent.neighbours)
    for (const auto& d : spec.digits) {
      Element a = d - c;
      for (Element e : {a, a + hull})
        if (e.sign() > 0 && e < L) ends.push_back(std::move(e));
    }
  std::sort(ends.begin(), ends.end(), [](const Element& x, const Element& y) { return x < y; });
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  std::vector<ChildCandidate> out;
  for (std::size_t e = 0; e + 1 < ends.size(); ++e) {
    const Element& h = ends[e];
    const Element& h2 = ends[e + 1];
    Element len = (h2 - h) * beta;
    // (parent row, digit index, neighbour value)
    std::vector<std::tuple<std::size_t, std::size_t, Element>> hits;
    for (std::size_t j = 0; j < parent.neighbours.size(); ++j)
      for (std::size_t s = 0; s < spec.digits.size(); ++s) {
        Element a = spec.digits[s] - parent.neighbours[j];
        if (a <= h && a + hull >= h2) hits.emplace_back(j, s, (h - a) * beta);
      }
    std::vector<Element> nbrs;
    for (const auto& [j, s, v] : hits)
      if (std::find(nbrs.begin(), nbrs.end(), v) == nbrs.end() && oracle.intersects(v, v + len)) nbrs.push_back(v);
    if (nbrs.empty()) continue;
    std::sort(nbrs.begin(), nbrs.end(), [](const Element& x, const Element& y) { return x < y; });

    ChildCandidate cc{h, h2, {len, nbrs}, {}};
    if (spec.has_probs()) {
      cc.matrix = RatMatrix::Zero(static_cast<Eigen::Index>(parent.neighbours.size()),
                                  static_cast<Eigen::Index>(nbrs.size()));
      for (const auto& [j, s, v] : hits) {
        auto it = std::find(nbrs.begin(), nbrs.end(), v);
        if (it == nbrs.end()) continue;
        cc.matrix(static_cast<Eigen::Index>(j), it - nbrs.begin()) = spec.probs[s];
      }
    }
    out.push_back(std::move(cc));
  }
  return out;
}

int TransitionDiagram::root_width() const { return static_cast<int>(nodes.at(root).neighbours.size()); }

TransitionDiagram closure(const MeasureSpec& spec, const ClosureOptions& opt) {
  TransitionDiagram d;
  d.spec = spec;
  KOracle oracle(d.spec, opt.caps.max_questions);
  for (const auto& [k, v] : opt.seed) oracle.seed(k, v);

  std::map<CharVector, int, CharLess> ids;
  std::map<ReducedVector, int, ReducedLess> reduced_ids;
  std::map<ReducedVector, std::vector<ChildCandidate>, ReducedLess> child_cache;

  auto add_node = [&](CharVector cv, int depth, int parent) {
    int id = static_cast<int>(d.nodes.size());
    ReducedVector rv = cv.reduced();
    auto [rit, fresh] = reduced_ids.try_emplace(rv, static_cast<int>(d.reduced_rep.size()));
    if (fresh) d.reduced_rep.push_back(id);
    d.reduced_id.push_back(rit->second);
    ids.emplace(cv, id);
    d.nodes.push_back(std::move(cv));
    d.depth.push_back(depth);
    d.out.emplace_back();
    d.expanded.push_back(false);
    d.tree_parent.push_back(parent);
    return id;
  };

  ReducedVector rv = root_vector(d.spec);
  d.root = add_node(CharVector{rv.length, rv.neighbours, 1}, 0, -1);

  auto truncate = [&](const std::string& why, int at) {
    d.truncated = true;
    d.truncation_reason = why;
    for (int v = at; v >= 0; v = d.tree_parent[v]) d.witness.push_back(v);
    std::reverse(d.witness.begin(), d.witness.end());
  };

  std::deque<int> queue{d.root};
  while (!queue.empty() && !d.truncated) {
    int id = queue.front();
    queue.pop_front();
    if (d.depth[id] >= opt.caps.max_depth) {
      truncate("depth cap " + std::to_string(opt.caps.max_depth) + " reached", id);
      break;
    }
    ReducedVector key = d.nodes[id].reduced();
    auto cit = child_cache.find(key);
    if (cit == child_cache.end()) {
      try {
        cit = child_cache.emplace(key, children(d.spec, key, oracle)).first;
      } catch (const OracleCapExceeded& e) {
        truncate(e.what(), id);
        break;
      }
    }
    std::map<ReducedVector, int, ReducedLess> rank;
    const auto& kids = cit->second;
    for (std::size_t pos = 0; pos < kids.size(); ++pos) {
      const auto& kid = kids[pos];
      CharVector cv{kid.reduced.length, kid.reduced.neighbours, ++rank[kid.reduced]};
      int cid;
      if (auto it = ids.find(cv); it != ids.end()) {
        cid = it->second;
      } else {
        if (d.nodes.size() >= opt.caps.max_nodes) {
          truncate("node cap " + std::to_string(opt.caps.max_nodes) + " reached", id);
          break;
        }
        cid = add_node(std::move(cv), d.depth[id] + 1, id);
        queue.push_back(cid);
      }
      d.out[id].push_back(static_cast<int>(d.edges.size()));
      d.edges.push_back(ChildEdge{id, cid, static_cast<int>(pos), kid.left, kid.right, kid.matrix});
    }
    if (!d.truncated) d.expanded[id] = true;
  }
  d.questions = oracle.questions();
  if (opt.memo_out) opt.memo_out->assign(oracle.memo().begin(), oracle.memo().end());
  return d;
}

std::vector<LevelInterval> enumerate_level(const TransitionDiagram& d, int n) {
  const Field& f = *d.spec.field;
  LevelInterval root;
  root.node = d.root;
  root.left = f.zero();
  root.q = Mat<Rational>::Ones(1, d.root_width());
  std::vector<LevelInterval> level{root};
  Element scale = f.one();  // rho^level
  for (int k = 0; k < n; ++k) {
    std::vector<LevelInterval> next;
    for (const auto& li : level) {
      if (!d.expanded[li.node]) throw std::runtime_error("enumerate_level reached an unexpanded node");
      for (int e : d.out[li.node]) {
        const ChildEdge& edge = d.edges[e];
        LevelInterval c;
        c.node = edge.child;
        c.left = li.left + scale * edge.left;
        c.path = li.path;
        c.path.push_back(e);
        if (d.has_matrices()) c.q = (li.q * edge.matrix).eval();
        next.push_back(std::move(c));
      }
    }
    level = std::move(next);
    scale *= d.spec.rho;
  }
  return level;
}

}  // namespace locdim
