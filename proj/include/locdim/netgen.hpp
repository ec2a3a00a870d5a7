#pragma once

#include "locdim/model.hpp"
#include "locdim/spectra.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace locdim {

/// (normalized length, neighbours) of a net interval.
struct ReducedVector {
  Element length;
  std::vector<Element> neighbours;
};

/// Node identity of the transition diagram.
struct CharVector {
  Element length;
  std::vector<Element> neighbours;
  int sibling = 1;  // rank among same-reduced-form siblings, from 1

  ReducedVector reduced() const { return {length, neighbours}; }
  std::string str() const;
};

struct ReducedLess {
  bool operator()(const ReducedVector& a, const ReducedVector& b) const;
};
struct CharLess {
  bool operator()(const CharVector& a, const CharVector& b) const;
};

struct OracleCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decides K ∩ (u, v) != ∅ for the line attractor K by memoized reachability
/// over rescaled questions.
class KOracle {
 public:
  KOracle(const MeasureSpec& spec, std::size_t max_questions);
  bool intersects(const Element& u, const Element& v);
  std::size_t questions() const { return memo_.size(); }

  using Key = std::pair<Element, Element>;
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const;
  };
  const std::map<Key, bool, KeyLess>& memo() const { return memo_; }
  void seed(const Key& k, bool value) { memo_[k] = value; }

 private:
  enum class Verdict { accept, reject, open };
  Verdict classify(Element& u, Element& v) const;

  const MeasureSpec& spec_;
  Element beta_;
  std::size_t cap_;
  std::map<Key, bool, KeyLess> memo_;
};

/// A child of a reduced node, before sibling ranks are attached.
struct ChildCandidate {
  Element left, right;  // endpoints in the parent frame
  ReducedVector reduced;
  RatMatrix matrix;  // empty when the spec has no probabilities
};

/// Ordered children of a reduced vector; `pseudo` marks the root.
std::vector<ChildCandidate> children(const MeasureSpec& spec, const ReducedVector& parent, KOracle& oracle);

ReducedVector root_vector(const MeasureSpec& spec);

struct ChildEdge {
  int parent = 0, child = 0;
  int position = 0;  // left-to-right index among the parent's children
  Element left, right;
  RatMatrix matrix;
};

struct Caps {
  std::size_t max_nodes = 20000;
  int max_depth = 10000;
  std::size_t max_questions = 2'000'000;
};

struct TransitionDiagram {
  MeasureSpec spec;
  std::vector<CharVector> nodes;
  std::vector<int> depth;
  std::vector<int> reduced_id;         // node -> reduced id (0-based)
  std::vector<int> reduced_rep;        // reduced id -> first node
  std::vector<std::vector<int>> out;   // node -> edge indices, left to right
  std::vector<ChildEdge> edges;
  std::vector<bool> expanded;
  std::vector<int> tree_parent;        // discovery parent, -1 at root
  int root = 0;
  bool truncated = false;
  std::string truncation_reason;
  std::vector<int> witness;            // root-to-node discovery path at truncation
  std::size_t questions = 0;

  std::size_t size() const { return nodes.size(); }
  std::size_t reduced_count() const { return reduced_rep.size(); }
  bool has_matrices() const { return spec.has_probs(); }
  /// Rows of the pseudo-neighbour weight vector at the root.
  int root_width() const;
};

struct ClosureOptions {
  Caps caps;
  /// Questions answered in a previous run, e.g. from the on-disk cache.
  std::vector<std::pair<KOracle::Key, bool>> seed;
  /// Receives every answered question when set.
  std::vector<std::pair<KOracle::Key, bool>>* memo_out = nullptr;
};

TransitionDiagram closure(const MeasureSpec& spec, const ClosureOptions& opt = {});

/// Every level-n net interval: node, absolute left endpoint and weight vector Q_n.
struct LevelInterval {
  int node = 0;
  Element left;
  std::vector<int> path;  // edge indices from the root
  Mat<Rational> q;        // 1 x |neighbours|
};
std::vector<LevelInterval> enumerate_level(const TransitionDiagram& d, int n);

}  // namespace locdim
