#include "locdim/dims.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace locdim {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

Rational pow2(long e) { return e >= 0 ? Rational(Integer(1) << e) : Rational(1, Integer(1) << -e); }

// Bracket with a tolerance relative to the size of the matrix.
SpectralBracket bracket_relative(const RatMatrix& m) {
  Rational big = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) big = std::max(big, Rational(m(i, j)));
  if (big == 0) return spectral_radius(m);
  long shift = static_cast<long>(std::floor(log_rational(big) / std::log(2.0L)));
  RatMatrix scaled = m * pow2(-shift);
  SpectralBracket br = spectral_radius(scaled, pow2(-50));
  br.lo *= pow2(shift);
  br.hi *= pow2(shift);
  return br;
}

long double dim_of(const Rational& sp, int steps, long double lr) {
  if (sp <= 0) return kInf;
  return log_rational(sp) / (static_cast<long double>(steps) * lr);
}

std::vector<std::vector<int>> internal_out(const TransitionDiagram& d, const LoopClass& c) {
  std::vector<std::vector<int>> out(d.size());
  for (int e : c.internal_edges) out[d.edges[e].parent].push_back(e);
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

}  // namespace

long double log_rho(const MeasureSpec& s) { return std::log(s.rho.approx()); }

DimBracket dims_from_spectral(const MeasureSpec& s, long double spectral_lo, long double spectral_hi) {
  const long double lr = log_rho(s);
  return {spectral_hi > 0 ? std::log(spectral_hi) / lr : kInf, spectral_lo > 0 ? std::log(spectral_lo) / lr : kInf};
}

// ------------------------------------------------------------ periodic points

PeriodicDim periodic_dim(const TransitionDiagram& d, const std::vector<int>& cycle) {
  if (!d.has_matrices()) throw DimsError("periodic_dim needs probabilities");
  if (cycle.empty()) throw DimsError("empty cycle");
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    int e = cycle[i];
    if (e < 0 || e >= static_cast<int>(d.edges.size())) throw DimsError("unknown edge in cycle");
    int next = cycle[(i + 1) % cycle.size()];
    if (next < 0 || next >= static_cast<int>(d.edges.size())) throw DimsError("unknown edge in cycle");
    if (d.edges[e].child != d.edges[next].parent) throw DimsError("path is not a closed walk in the diagram");
  }
  PeriodicDim p;
  p.cycle = cycle;
  p.length = static_cast<int>(cycle.size());
  std::vector<RatMatrix> ms;
  for (int e : cycle) ms.push_back(d.edges[e].matrix);
  p.product = path_product(ms);
  p.sp = bracket_relative(p.product);
  const long double lr = log_rho(d.spec);
  p.dim = {dim_of(p.sp.hi, p.length, lr), dim_of(p.sp.lo, p.length, lr)};
  if (p.sp.hi > 0) {
    long double mid = log_rational(p.sp.lo > 0 ? Rational((p.sp.lo + p.sp.hi) / 2) : p.sp.hi);
    p.per_step = std::exp(mid / p.length);
    p.per_step_scaled = p.per_step * std::exp(log_integer(d.spec.prob_scale()));
  }
  return p;
}

// ------------------------------------------------------------ inner interval

InnerInterval inner_interval(const TransitionDiagram& d, const LoopClass& c, int max_len, std::size_t walk_cap) {
  if (!d.has_matrices()) throw DimsError("inner_interval needs probabilities");
  if (max_len < 1) throw DimsError("cycle length must be positive");
  auto out = internal_out(d, c);
  std::vector<Mat<double>> dm(d.edges.size());
  for (int e : c.internal_edges) dm[e] = to_double(d.edges[e].matrix);

  InnerInterval r;
  r.max_len = max_len;
  struct Best {
    double value = -1;
    std::vector<int> walk;
  };
  Best hi, lo;
  auto offer = [](Best& b, double v, const std::vector<int>& w, bool larger) {
    if (b.value < 0) {
      b = {v, w};
      return;
    }
    double tol = 1e-12 * std::max(v, b.value);
    bool better = larger ? v > b.value + tol : v < b.value - tol;
    bool tie = std::abs(v - b.value) <= tol;
    if (better || (tie && w.size() < b.walk.size())) b = {v, w};
  };

  // Closed walks rooted at their smallest node, visiting no smaller node.
  std::vector<int> walk;
  std::vector<Mat<double>> prods;
  for (int s : c.nodes) {
    if (r.partial) break;
    struct Frame {
      int node;
      std::size_t next;
    };
    std::vector<Frame> stack{{s, 0}};
    walk.clear();
    prods.clear();
    while (!stack.empty() && !r.partial) {
      Frame& f = stack.back();
      if (f.next >= out[f.node].size() || static_cast<int>(walk.size()) >= max_len) {
        stack.pop_back();
        if (!walk.empty()) {
          walk.pop_back();
          prods.pop_back();
        }
        continue;
      }
      int e = out[f.node][f.next++];
      int w = d.edges[e].child;
      if (w < s) continue;
      walk.push_back(e);
      prods.push_back(prods.empty() ? dm[e] : Mat<double>(prods.back() * dm[e]));
      if (w == s) {
        if (++r.walks > walk_cap) {
          r.partial = true;
          break;
        }
        const Mat<double>& p = prods.back();
        double sp = spectral_radius_estimate(p);
        double size = p.cwiseAbs().maxCoeff();
        if (sp > 1e-10 * size) {
          double v = std::pow(sp, 1.0 / static_cast<double>(walk.size()));
          offer(hi, v, walk, true);
          offer(lo, v, walk, false);
        }
      }
      stack.push_back({w, 0});
    }
  }
  if (hi.walk.empty()) throw DimsError("loop class " + c.label() + " has no closed walk with positive spectral radius");
  r.low_dim = periodic_dim(d, hi.walk);
  r.high_dim = periodic_dim(d, lo.walk);
  return r;
}

// ------------------------------------------------------------ outer interval

std::string to_string(LowerNorm n) { return n == LowerNorm::min_column ? "min-column" : "min-row"; }

std::string OuterConvention::str() const {
  std::ostringstream os;
  os << to_string(norm);
  if (positions.empty()) {
    os << " full";
  } else {
    os << " on {";
    for (std::size_t i = 0; i < positions.size(); ++i) os << (i ? "," : "") << positions[i] + 1;
    os << "}";
  }
  return os.str();
}

DimBracket OuterInterval::dims() const {
  const long double ls = log_integer(scale);
  DimBracket b;
  b.lo = upper_norm > 0 ? (log_integer(upper_norm) / depth_hi - ls) / log_rho : kInf;
  b.hi = lower_norm > 0 ? (log_integer(lower_norm) / depth_lo - ls) / log_rho : kInf;
  return b;
}

RatMatrix OuterInterval::lower_matrix() const {
  RatMatrix m(1, 1);
  m(0, 0) = Rational(lower_norm, boost::multiprecision::pow(scale, static_cast<unsigned>(depth_lo)));
  return m;
}

RatMatrix OuterInterval::upper_matrix() const {
  RatMatrix m(1, 1);
  m(0, 0) = Rational(upper_norm, boost::multiprecision::pow(scale, static_cast<unsigned>(depth_hi)));
  return m;
}

namespace {

template <class T>
struct Flat {
  int rows = 0, cols = 0;
  std::vector<T> a;
  T& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const T& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

template <class T>
void multiply(const Flat<T>& p, const Flat<T>& e, Flat<T>& out) {
  out.rows = p.rows;
  out.cols = e.cols;
  out.a.assign(static_cast<std::size_t>(p.rows) * e.cols, T(0));
  for (int i = 0; i < p.rows; ++i)
    for (int k = 0; k < p.cols; ++k) {
      const T& x = p.at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < e.cols; ++j) out.at(i, j) += x * e.at(k, j);
    }
}

template <class T>
T to_scalar(const Integer& v);
template <>
__int128 to_scalar<__int128>(const Integer& v) {
  return static_cast<__int128>(v.convert_to<long long>());
}
template <>
Integer to_scalar<Integer>(const Integer& v) {
  return v;
}

Integer to_integer(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  Integer r = Integer(static_cast<unsigned long long>(u >> 64));
  r <<= 64;
  r += Integer(static_cast<unsigned long long>(u & ~0ULL));
  return neg ? Integer(-r) : r;
}
Integer to_integer(const Integer& v) { return v; }

// What a leaf contributes: upper norm, full lower norms and subset norms.
struct LeafPlan {
  bool upper = false;
  bool lower = false;
  int m = 0;                        // subset positions range over [0, m)
  std::vector<std::uint64_t> masks; // subsets evaluated, both norms
  bool dp = false;                  // masks are all subsets of [0, m)
};

template <class T>
struct Acc {
  bool seen = false;
  T upper{0}, full_col{0}, full_row{0};
  std::vector<T> sub_col, sub_row;
  std::size_t leaves = 0;

  void merge(const Acc& o) {
    if (!o.seen) return;
    leaves += o.leaves;
    if (!seen) {
      *this = o;
      leaves = o.leaves;
      return;
    }
    upper = std::max(upper, o.upper);
    full_col = std::min(full_col, o.full_col);
    full_row = std::min(full_row, o.full_row);
    for (std::size_t i = 0; i < sub_col.size(); ++i) {
      sub_col[i] = std::min(sub_col[i], o.sub_col[i]);
      sub_row[i] = std::min(sub_row[i], o.sub_row[i]);
    }
  }
};

template <class T>
void leaf(const Flat<T>& p, const LeafPlan& plan, Acc<T>& acc, std::vector<T>& rs, std::vector<T>& cs) {
  ++acc.leaves;
  T up{0}, lc{0}, lr{0};
  for (int j = 0; j < p.cols; ++j) {
    T s{0};
    for (int i = 0; i < p.rows; ++i) s += p.at(i, j);
    if (j == 0 || s > up) up = s;
    if (j == 0 || s < lc) lc = s;
  }
  for (int i = 0; i < p.rows; ++i) {
    T s{0};
    for (int j = 0; j < p.cols; ++j) s += p.at(i, j);
    if (i == 0 || s < lr) lr = s;
  }
  const std::size_t nm = plan.masks.size();
  if (!acc.seen) {
    acc.seen = true;
    acc.upper = up;
    acc.full_col = lc;
    acc.full_row = lr;
    acc.sub_col.assign(nm, T(0));
    acc.sub_row.assign(nm, T(0));
  } else {
    acc.upper = std::max(acc.upper, up);
    acc.full_col = std::min(acc.full_col, lc);
    acc.full_row = std::min(acc.full_row, lr);
  }
  if (nm == 0) return;
  const int m = plan.m;
  const bool first = acc.leaves == 1;
  if (plan.dp) {
    // rs[i * 2^m + mask]: sum over j in mask of p(i, j); cs likewise by column.
    const std::size_t full = std::size_t(1) << m;
    rs.assign(static_cast<std::size_t>(m) * full, T(0));
    cs.assign(static_cast<std::size_t>(m) * full, T(0));
    for (std::size_t mask = 1; mask < full; ++mask) {
      int b = __builtin_ctzll(mask);
      std::size_t rest = mask & (mask - 1);
      for (int i = 0; i < m; ++i) {
        rs[i * full + mask] = rs[i * full + rest] + p.at(i, b);
        cs[i * full + mask] = cs[i * full + rest] + p.at(b, i);
      }
    }
    for (std::size_t k = 0; k < nm; ++k) {
      std::uint64_t mask = plan.masks[k];
      T br{0}, bc{0};
      bool any = false;
      for (std::uint64_t rem = mask; rem; rem &= rem - 1) {
        int i = __builtin_ctzll(rem);
        const T& r = rs[i * full + mask];
        const T& c = cs[i * full + mask];
        if (!any || r < br) br = r;
        if (!any || c < bc) bc = c;
        any = true;
      }
      if (first || br < acc.sub_row[k]) acc.sub_row[k] = br;
      if (first || bc < acc.sub_col[k]) acc.sub_col[k] = bc;
    }
    return;
  }
  for (std::size_t k = 0; k < nm; ++k) {
    std::uint64_t mask = plan.masks[k];
    T br{0}, bc{0};
    bool any = false;
    for (std::uint64_t a = mask; a; a &= a - 1) {
      int i = __builtin_ctzll(a);
      T r{0}, c{0};
      for (std::uint64_t b = mask; b; b &= b - 1) {
        int j = __builtin_ctzll(b);
        r += p.at(i, j);
        c += p.at(j, i);
      }
      if (!any || r < br) br = r;
      if (!any || c < bc) bc = c;
      any = true;
    }
    if (first || br < acc.sub_row[k]) acc.sub_row[k] = br;
    if (first || bc < acc.sub_col[k]) acc.sub_col[k] = bc;
  }
}

// Enumerates every internal path of length n, in parallel over short prefixes.
template <class T>
Acc<T> walk_paths(const TransitionDiagram& d, const LoopClass& c, const std::vector<IntMatrix>& scaled, int n,
                  const LeafPlan& plan) {
  auto out = internal_out(d, c);
  std::vector<Flat<T>> em(d.edges.size());
  for (int e : c.internal_edges) {
    const IntMatrix& m = scaled[e];
    Flat<T> f{static_cast<int>(m.rows()), static_cast<int>(m.cols()), {}};
    f.a.resize(static_cast<std::size_t>(f.rows) * f.cols);
    for (int i = 0; i < f.rows; ++i)
      for (int j = 0; j < f.cols; ++j) f.at(i, j) = to_scalar<T>(m(i, j));
    em[e] = std::move(f);
  }
  // Prefixes of length up to 2 split the work.
  std::vector<std::vector<int>> tasks;
  const int split = std::min(n, 2);
  std::vector<int> cur;
  std::function<void(int)> gen = [&](int node) {
    if (static_cast<int>(cur.size()) == split) {
      tasks.push_back(cur);
      return;
    }
    for (int e : out[node]) {
      cur.push_back(e);
      gen(d.edges[e].child);
      cur.pop_back();
    }
  };
  for (int v : c.nodes) gen(v);

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  Acc<T> total;
  auto worker = [&] {
    Acc<T> acc;
    std::vector<Flat<T>> stack(n + 1);
    std::vector<T> rs, cs;
    struct Frame {
      int node;
      std::size_t next;
    };
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto& pre = tasks[t];
      stack[1] = em[pre[0]];
      for (std::size_t k = 1; k < pre.size(); ++k) multiply(stack[k], em[pre[k]], stack[k + 1]);
      int depth = static_cast<int>(pre.size());
      if (depth == n) {
        leaf(stack[n], plan, acc, rs, cs);
        continue;
      }
      std::vector<Frame> frames{{d.edges[pre.back()].child, 0}};
      while (!frames.empty()) {
        Frame& f = frames.back();
        int level = depth + static_cast<int>(frames.size()) - 1;  // edges in stack[level]
        if (f.next >= out[f.node].size()) {
          frames.pop_back();
          continue;
        }
        int e = out[f.node][f.next++];
        multiply(stack[level], em[e], stack[level + 1]);
        if (level + 1 == n) {
          leaf(stack[n], plan, acc, rs, cs);
        } else {
          frames.push_back({d.edges[e].child, 0});
        }
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    total.merge(acc);
  };
  unsigned threads = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return total;
}

long double path_count(const TransitionDiagram& d, const LoopClass& c, int n) {
  auto out = internal_out(d, c);
  std::vector<long double> ways(d.size(), 0);
  for (int v : c.nodes) ways[v] = 1;
  for (int k = 0; k < n; ++k) {
    std::vector<long double> next(d.size(), 0);
    for (int v : c.nodes)
      for (int e : out[v]) next[v] += ways[d.edges[e].child];
    ways = std::move(next);
  }
  long double total = 0;
  for (int v : c.nodes) total += ways[v];
  return total;
}

struct Pass {
  Integer upper, full_col, full_row;
  std::vector<Integer> sub_col, sub_row;
};

Pass run_pass(const TransitionDiagram& d, const LoopClass& c, const std::vector<IntMatrix>& scaled, int n,
              const LeafPlan& plan) {
  // Entries of a length-n product are bounded by the product of the 1-norms.
  long double log_bound = 0;
  int width = 1;
  for (int e : c.internal_edges) width = std::max(width, static_cast<int>(scaled[e].cols()));
  long double worst = 0;
  for (int e : c.internal_edges) {
    Integer m = max_col_sum(scaled[e]);
    if (m > 0) worst = std::max(worst, log_integer(m));
  }
  log_bound = n * worst + std::log(static_cast<long double>(width) + 1) * 2;
  auto convert = [](auto acc) {
    Pass p;
    p.upper = to_integer(acc.upper);
    p.full_col = to_integer(acc.full_col);
    p.full_row = to_integer(acc.full_row);
    for (auto& v : acc.sub_col) p.sub_col.push_back(to_integer(v));
    for (auto& v : acc.sub_row) p.sub_row.push_back(to_integer(v));
    return p;
  };
  if (log_bound < 118 * std::log(2.0L)) return convert(walk_paths<__int128>(d, c, scaled, n, plan));
  return convert(walk_paths<Integer>(d, c, scaled, n, plan));
}

}  // namespace

OuterInterval outer_interval(const TransitionDiagram& d, const LoopClass& c, const OuterOptions& opt) {
  if (!d.has_matrices()) throw DimsError("outer_interval needs probabilities");
  if (opt.depth_lo < 1 || opt.depth_hi < 1) throw DimsError("outer depths must be positive");
  OuterInterval r;
  r.scale = d.spec.prob_scale();
  r.log_rho = log_rho(d.spec);
  std::vector<IntMatrix> scaled(d.edges.size());
  for (int e : c.internal_edges) scaled[e] = to_scaled(d.edges[e].matrix, r.scale);

  auto capped = [&](int depth, const char* which) {
    int n = depth;
    while (n > 1 && path_count(d, c, n) > static_cast<long double>(opt.path_cap)) --n;
    if (n != depth) {
      std::ostringstream os;
      os << which << " depth reduced from " << depth << " to " << n << " (path cap " << opt.path_cap << ")";
      r.warnings.push_back(os.str());
    }
    return n;
  };
  r.depth_lo = capped(opt.depth_lo, "lower");
  r.depth_hi = capped(opt.depth_hi, "upper");

  int m = std::numeric_limits<int>::max();
  for (int v : c.nodes) m = std::min(m, static_cast<int>(d.nodes[v].neighbours.size()));

  LeafPlan lower_plan;
  lower_plan.lower = true;
  lower_plan.m = std::min(m, 64);
  if (opt.search) {
    if (m <= 8) {
      lower_plan.dp = true;
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) lower_plan.masks.push_back(mask);
    } else {
      for (int a = 0; a < lower_plan.m; ++a) {
        lower_plan.masks.push_back(std::uint64_t(1) << a);
        for (int b = a + 1; b < lower_plan.m; ++b)
          lower_plan.masks.push_back((std::uint64_t(1) << a) | (std::uint64_t(1) << b));
      }
    }
  } else if (opt.convention && !opt.convention->positions.empty()) {
    std::uint64_t mask = 0;
    for (int p : opt.convention->positions) {
      if (p < 0 || p >= m || p >= 64)
        throw DimsError("position " + std::to_string(p + 1) + " exceeds the neighbour count of class " + c.label());
      mask |= std::uint64_t(1) << p;
    }
    lower_plan.masks.push_back(mask);
  }

  Pass lo_pass = run_pass(d, c, scaled, r.depth_lo, lower_plan);
  Pass hi_pass = r.depth_hi == r.depth_lo ? lo_pass : run_pass(d, c, scaled, r.depth_hi, LeafPlan{});
  r.upper_norm = hi_pass.upper;

  auto positions_of = [](std::uint64_t mask) {
    std::vector<int> p;
    for (int i = 0; i < 64; ++i)
      if (mask >> i & 1) p.push_back(i);
    return p;
  };
  if (opt.search) {
    // Full norms first, then subsets by size; ties keep the earlier choice.
    r.convention = {LowerNorm::min_column, {}};
    r.lower_norm = lo_pass.full_col;
    if (lo_pass.full_row > r.lower_norm) {
      r.convention = {LowerNorm::min_row, {}};
      r.lower_norm = lo_pass.full_row;
    }
    std::vector<std::size_t> order(lower_plan.masks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return __builtin_popcountll(lower_plan.masks[a]) < __builtin_popcountll(lower_plan.masks[b]);
    });
    for (std::size_t k : order) {
      if (lo_pass.sub_col[k] > r.lower_norm) {
        r.convention = {LowerNorm::min_column, positions_of(lower_plan.masks[k])};
        r.lower_norm = lo_pass.sub_col[k];
      }
      if (lo_pass.sub_row[k] > r.lower_norm) {
        r.convention = {LowerNorm::min_row, positions_of(lower_plan.masks[k])};
        r.lower_norm = lo_pass.sub_row[k];
      }
    }
  } else {
    r.convention = opt.convention.value_or(OuterConvention{});
    if (r.convention.positions.empty())
      r.lower_norm = r.convention.norm == LowerNorm::min_column ? lo_pass.full_col : lo_pass.full_row;
    else
      r.lower_norm = r.convention.norm == LowerNorm::min_column ? lo_pass.sub_col[0] : lo_pass.sub_row[0];
    std::sort(r.convention.positions.begin(), r.convention.positions.end());
  }
  r.lower_available = r.lower_norm > 0;
  const long double ls = log_integer(r.scale);
  r.spectral_hi = r.upper_norm > 0 ? std::exp(log_integer(r.upper_norm) / r.depth_hi - ls) : 0;
  r.spectral_lo = r.lower_norm > 0 ? std::exp(log_integer(r.lower_norm) / r.depth_lo - ls) : 0;
  return r;
}

namespace {

struct End {
  RatMatrix m;
  int steps = 1;
};

bool le(const End& a, const End& b) {
  auto o = compare_spectral(a.m, a.steps, b.m, b.steps);
  return o == SpectralOrder::less || o == SpectralOrder::equal;
}
bool lt(const End& a, const End& b) { return compare_spectral(a.m, a.steps, b.m, b.steps) == SpectralOrder::less; }

End zero_end() {
  RatMatrix z(1, 1);
  z(0, 0) = 0;
  return {z, 1};
}

}  // namespace

bool inner_within_outer(const TransitionDiagram&, const InnerInterval& in, const OuterInterval& out) {
  End top{in.low_dim.product, in.low_dim.length}, bottom{in.high_dim.product, in.high_dim.length};
  End hi{out.upper_matrix(), out.depth_hi};
  End lo = out.lower_available ? End{out.lower_matrix(), out.depth_lo} : zero_end();
  return le(top, hi) && le(lo, bottom);
}

DimBracket sss_interval(const Validated& v) {
  if (!v.report.strong_separation)
    throw DimsError("the strong separation condition fails; use the transition-diagram pipeline");
  const auto& p = v.spec.probs;
  if (p.empty()) throw DimsError("sss_interval needs probabilities");
  Rational big = *std::max_element(p.begin(), p.end()), small = *std::min_element(p.begin(), p.end());
  const long double lr = log_rho(v.spec);
  return {log_rational(big) / lr, log_rational(small) / lr};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::isolated: return "isolated";
    case Verdict::inside: return "inside-essential-interval";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

bool DimensionReport::any_undecided() const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [](const Candidate& c) { return c.verdict == Verdict::undecided; });
}

namespace {

std::vector<int> simple_cycle_edges(const TransitionDiagram& d, const LoopClass& c) {
  auto out = internal_out(d, c);
  std::vector<int> cyc;
  int v = c.nodes.front();
  do {
    int e = out[v].front();
    cyc.push_back(e);
    v = d.edges[e].child;
  } while (v != c.nodes.front());
  return cyc;
}

}  // namespace

DimensionReport isolated_report(const TransitionDiagram& d, const ClassReport& classes, const DimsOptions& opt) {
  if (!d.has_matrices()) throw DimsError("isolated_report needs probabilities");
  DimensionReport rep;
  for (std::size_t i = 0; i < classes.classes.size(); ++i) {
    const LoopClass& c = classes.classes[i];
    ClassDims cd;
    cd.class_index = static_cast<int>(i);
    try {
      cd.inner = inner_interval(d, c, opt.cycle_len);
    } catch (const DimsError& e) {
      rep.notes.push_back(e.what());
    }
    OuterOptions o = opt.outer;
    if (c.kind != ClassKind::essential) {
      o.search = false;
      o.convention.reset();
    }
    cd.outer = outer_interval(d, c, o);
    rep.per_class.push_back(std::move(cd));
  }

  std::vector<int> essential;
  for (std::size_t i = 0; i < classes.classes.size(); ++i)
    if (classes.classes[i].kind == ClassKind::essential) essential.push_back(static_cast<int>(i));

  for (std::size_t i = 0; i < classes.classes.size(); ++i) {
    const LoopClass& c = classes.classes[i];
    if (c.kind == ClassKind::essential) continue;
    Candidate cand;
    cand.class_index = static_cast<int>(i);
    End top, bottom;  // largest and smallest per-step spectral value of the class
    if (c.simple_cycle) {
      PeriodicDim p = periodic_dim(d, simple_cycle_edges(d, c));
      cand.dims = p.dim;
      top = bottom = {p.product, p.length};
    } else {
      const OuterInterval& o = *rep.per_class[i].outer;
      cand.dims = o.dims();
      top = {o.upper_matrix(), o.depth_hi};
      bottom = o.lower_available ? End{o.lower_matrix(), o.depth_lo} : zero_end();
    }
    if (essential.empty()) {
      cand.verdict = Verdict::undecided;
      cand.detail = "no essential class to compare against";
      rep.candidates.push_back(std::move(cand));
      continue;
    }
    bool outside_all = true;
    int inside_of = -1;
    for (int k : essential) {
      const OuterInterval& o = *rep.per_class[k].outer;
      End hi{o.upper_matrix(), o.depth_hi};
      End lo = o.lower_available ? End{o.lower_matrix(), o.depth_lo} : zero_end();
      if (!(lt(hi, bottom) || lt(top, lo))) outside_all = false;
      if (!rep.per_class[k].inner) continue;
      const InnerInterval& in = *rep.per_class[k].inner;
      End in_top{in.low_dim.product, in.low_dim.length}, in_bottom{in.high_dim.product, in.high_dim.length};
      if (inside_of < 0 && le(top, in_top) && le(in_bottom, bottom)) inside_of = k;
    }
    if (outside_all) {
      cand.verdict = Verdict::isolated;
      cand.detail = "outside every essential outer interval";
    } else if (inside_of >= 0) {
      cand.verdict = Verdict::inside;
      cand.detail = "within the inner interval of class " + classes.classes[inside_of].label();
    } else {
      cand.verdict = Verdict::undecided;
      cand.detail = "between inner and outer bounds of an essential class";
    }
    rep.candidates.push_back(std::move(cand));
  }
  return rep;
}

}  // namespace locdim
