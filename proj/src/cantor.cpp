#include "locdim/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <future>
#include <set>

namespace locdim {

std::vector<Rational> digit_weights(int k, const std::vector<int>& lambda, const std::vector<Rational>& probs) {
  if (k < 1) throw CantorError("k must be positive");
  if (lambda.size() != probs.size()) throw CantorError("need one probability per digit");
  std::vector<Rational> w(static_cast<std::size_t>(k) + 1, 0);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0 || lambda[i] > k) throw CantorError("digit index outside 0..k");
    w[lambda[i]] = probs[i];
  }
  return w;
}

RatMatrix cantor_T(int d, int k, const std::vector<Rational>& weights, int ell) {
  if (d < 2) throw CantorError("d must be at least 2");
  if (ell < 0 || ell >= d) throw CantorError("child index outside 0..d-1");
  if (static_cast<int>(weights.size()) != k + 1) throw CantorError("weights must have k + 1 entries");
  RatMatrix t = RatMatrix::Zero(k, k);
  for (int j = 1; j <= k; ++j)
    for (int i = 1; i <= k; ++i) {
      int num = ell - (i - 1) + (j - 1) * d;
      if (num % (d - 1) != 0) continue;
      int s = num / (d - 1);
      if (s >= 0 && s <= k) t(j - 1, i - 1) = weights[s];
    }
  return t;
}

bool cantor_premise_holds(int d, int k, const std::vector<int>& lambda) {
  std::set<int> l(lambda.begin(), lambda.end());
  return k >= d - 1 && static_cast<int>(l.size()) == k + 1 && *l.begin() == 0 && *l.rbegin() == k;
}

BlockLayout block_layout(int d, int k) {
  if (d < 3) throw CantorError("block layout needs d >= 3");
  BlockLayout b;
  b.d = d;
  b.k = k;
  int at = 0;
  for (int i = 1; i <= d - 1; ++i) {
    b.offsets.push_back(at);
    int size = 0;
    for (int pos = i; pos <= k; pos += d - 1, ++size) b.order.push_back(pos - 1);
    b.sizes.push_back(size);
    at += size;
  }
  return b;
}

RatMatrix BlockMatrix::block(int i, int j) const {
  return m.block(layout.offsets[i], layout.offsets[j], layout.sizes[i], layout.sizes[j]);
}

bool BlockMatrix::block_nonzero(int i, int j) const {
  for (int a = 0; a < layout.sizes[i]; ++a)
    for (int b = 0; b < layout.sizes[j]; ++b)
      if (m(layout.offsets[i] + a, layout.offsets[j] + b) != 0) return true;
  return false;
}

std::optional<int> BlockMatrix::type() const {
  const int n = layout.blocks();
  std::optional<int> r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!block_nonzero(i, j)) continue;
      int t = ((j - i) % n + n) % n;
      if (r && *r != t) return std::nullopt;
      r = t;
    }
  return r;
}

bool BlockMatrix::block_positive() const {
  const int n = layout.blocks();
  bool any = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!block_nonzero(i, j)) continue;
      any = true;
      if (!all_positive(block(i, j))) return false;
    }
  return any;
}

bool BlockMatrix::block_diagonal() const {
  auto t = type();
  return t && *t == 0;
}

BlockMatrix block_permute(const RatMatrix& t, const BlockLayout& layout) {
  if (t.rows() != layout.k || t.cols() != layout.k) throw CantorError("matrix size does not match the block layout");
  BlockMatrix b{layout, RatMatrix(layout.k, layout.k)};
  for (int a = 0; a < layout.k; ++a)
    for (int c = 0; c < layout.k; ++c) b.m(a, c) = t(layout.order[a], layout.order[c]);
  return b;
}

RatMatrix block_unpermute(const BlockMatrix& b) {
  const auto& l = b.layout;
  RatMatrix t(l.k, l.k);
  for (int a = 0; a < l.k; ++a)
    for (int c = 0; c < l.k; ++c) t(l.order[a], l.order[c]) = b.m(a, c);
  return t;
}

BlockMatrix block_product(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.layout.d != b.layout.d || a.layout.k != b.layout.k) throw CantorError("incompatible block layouts");
  return {a.layout, (a.m * b.m).eval()};
}

BlockMatrix block_power(const BlockMatrix& a, int n) {
  if (n < 1) throw CantorError("power must be positive");
  return {a.layout, matrix_power(a.m, n)};
}

ThetaResult upper_bound_theta(int d, int k, const std::vector<Rational>& weights, int depth) {
  if (depth < 1) throw CantorError("depth must be positive");
  BlockLayout layout = block_layout(d, k);
  std::vector<RatMatrix> ts;
  for (int ell = 0; ell < d; ++ell) ts.push_back(block_permute(cantor_T(d, k, weights, ell), layout).m);

  ThetaResult r;
  r.depth = depth;
  bool have = false;
  std::vector<int> word;
  std::vector<RatMatrix> prods(depth + 1);
  prods[0] = RatMatrix::Identity(k, k);
  std::function<void(int)> walk = [&](int level) {
    if (level == depth) {
      BlockMatrix b{layout, prods[level]};
      Rational g = 1;
      for (int i = 0; i < layout.blocks(); ++i)
        for (int j = 0; j < layout.blocks(); ++j)
          if (b.block_nonzero(i, j)) g *= min_col_sum(b.block(i, j));
      if (!have || g < r.block_product) {
        r.block_product = g;
        r.word = word;
        have = true;
      }
      return;
    }
    for (int ell = 0; ell < d; ++ell) {
      prods[level + 1] = (prods[level] * ts[ell]).eval();
      word.push_back(ell);
      walk(level + 1);
      word.pop_back();
    }
  };
  walk(0);
  r.usable = r.block_product > 0;
  if (r.usable) {
    long double lt = log_rational(r.block_product) / (static_cast<long double>(d - 1) * depth);
    r.theta = std::exp(lt);
    r.bound = lt / std::log(1.0L / d);
  } else {
    r.bound = std::numeric_limits<long double>::infinity();
  }
  return r;
}

BhmResult bhm_sup_dim(int d, int k) {
  if (d < 2) throw CantorError("d must be at least 2");
  if (k < -1) throw CantorError("k = m - d must be at least -1");
  BhmResult r;
  r.d = d;
  r.k = k;
  const int m = d + k;
  std::vector<Rational> pb = binomial_probs(m);
  auto p = [&](int j) { return j >= 0 && j <= m ? pb[j] : Rational(0); };
  int half = k >= 0 ? k / 2 : -1;  // floor(k / 2)
  r.a = p(half + d + 1) + p(half);
  Rational diff = p(half + d + 1) - p(half);
  r.disc = diff * diff + 4 * p(half + 1) * p(half + d);
  long double sq = std::sqrt(static_cast<long double>(r.disc.convert_to<double>()));
  r.beta = (static_cast<long double>(r.a.convert_to<double>()) + sq) / 2;
  r.value = std::log(r.beta) / std::log(1.0L / d);
  if (k == -1) r.flags.push_back("k = -1: outside the derivation, index range extended by p_j = 0");
  if (k > d - 2) r.flags.push_back("k > d - 2: outside the derivation's assumed range");
  return r;
}

bool theta_exceeds_beta(const ThetaResult& theta, const BhmResult& beta, int d) {
  if (!theta.usable) return false;
  // beta^N = X + Y sqrt(disc), N = (d-1) depth.
  const int n = (d - 1) * theta.depth;
  Rational x = 1, y = 0, u = beta.a / 2, v = Rational(1, 2);
  for (int i = 0; i < n; ++i) {
    Rational nx = x * u + y * v * beta.disc;
    Rational ny = x * v + y * u;
    x = nx;
    y = ny;
  }
  Rational lhs = theta.block_product - x;  // compare lhs > y sqrt(disc), y >= 0
  if (lhs <= 0) return false;
  return lhs * lhs > y * y * beta.disc;
}

ShrinkRow shrink_row(int m, int d, int depth_cap) {
  if (d < 3) throw CantorError("table rows need d >= 3");
  if (m < 1) throw CantorError("table rows need m >= 1");
  ShrinkRow row;
  row.m = m;
  row.d = d;
  BhmResult b = bhm_sup_dim(d, m - d);
  row.line = b.value;
  row.flags = b.flags;
  if (m < d) row.flags.push_back("m < d");
  std::vector<Rational> w = binomial_probs(m);
  bool first = true;
  for (int depth = 1; depth <= depth_cap; ++depth) {
    ThetaResult t = upper_bound_theta(d, m, w, depth);
    if (first || t.bound < row.torus) {
      row.torus = t.bound;
      row.depth = depth;
    }
    first = false;
    if (theta_exceeds_beta(t, b, d)) {
      row.holds = true;
      row.torus = t.bound;
      row.depth = depth;
      return row;
    }
  }
  row.depth = depth_cap;
  row.flags.push_back("undecided at depth cap " + std::to_string(depth_cap));
  return row;
}

std::vector<ShrinkRow> shrink_table(const std::vector<std::pair<int, int>>& pairs, int depth_cap) {
  std::vector<std::future<ShrinkRow>> jobs;
  for (auto [m, d] : pairs) jobs.push_back(std::async(std::launch::async, shrink_row, m, d, depth_cap));
  std::vector<ShrinkRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

std::vector<std::pair<int, int>> default_table_pairs(int max_m, int max_d) {
  std::vector<std::pair<int, int>> out;
  for (int d = 3; d <= max_d; ++d)
    for (int m = d - 1; m <= max_m; ++m) out.emplace_back(m, d);
  return out;
}

}  // namespace locdim
