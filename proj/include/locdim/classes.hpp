#pragma once

#include "locdim/netgen.hpp"

#include <string>
#include <vector>

namespace locdim {

enum class ClassKind { essential, maximal_non_essential };
enum class Positivity { unknown, positive, not_positive, undecided };
std::string to_string(ClassKind k);
std::string to_string(Positivity p);

struct LoopClass {
  std::vector<int> nodes;           // full-vector ids, ascending
  std::vector<int> reduced_labels;  // 1-based reduced ids, ascending
  std::vector<int> internal_edges;
  ClassKind kind = ClassKind::maximal_non_essential;
  bool simple_cycle = false;
  bool reaches_other_loop_class = false;
  Positivity positivity = Positivity::unknown;
  std::vector<int> witness_edges;
  bool row_nonzero = false;

  bool contains(int node) const;
  std::string label() const;  // e.g. "[5, 9, 10]"
};

struct ClassReport {
  std::vector<LoopClass> classes;
  std::vector<int> membership;  // node -> class index, -1 outside every loop class
  int essential_count = 0;
  bool from_truncated_diagram = false;
};

/// Strongly connected components that carry a cycle, classified.
ClassReport loop_classes(const TransitionDiagram& d);

struct PositivityResult {
  Positivity status = Positivity::unknown;
  std::vector<int> edges;  // witness path
  std::size_t explored = 0;
};

/// Breadth-first search over (start, end, support pattern) triples; the
/// witness returned is a shortest internal path with an all-positive product.
PositivityResult is_positive(const TransitionDiagram& d, const LoopClass& c, std::size_t cap = 200000);

/// Every internal edge matrix has a nonzero entry in every row.
bool row_nonzero_check(const TransitionDiagram& d, const LoopClass& c);

/// Runs positivity and row checks on every class in place.
void annotate_classes(const TransitionDiagram& d, ClassReport& r, std::size_t cap = 200000);

/// Reduced labels along an edge path, starting node included.
std::vector<int> path_labels(const TransitionDiagram& d, const std::vector<int>& edges);

}  // namespace locdim
