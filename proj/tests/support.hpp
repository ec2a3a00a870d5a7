#pragma once

#include "locdim/dims.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>

#ifndef LOCDIM_FIXTURES
#error "LOCDIM_FIXTURES must point at tests/fixtures"
#endif

namespace locdim::testing {

inline Validated load_fixture(const std::string& name, std::optional<Mode> mode = std::nullopt) {
  RawSpec raw = parse_spec_file(std::string(LOCDIM_FIXTURES) + "/" + name);
  if (mode) raw.mode = *mode;
  return spec_validate(raw);
}

inline TransitionDiagram diagram_of(const std::string& name, std::optional<Mode> mode = std::nullopt,
                                    Caps caps = {}) {
  ClosureOptions opt;
  opt.caps = caps;
  return closure(load_fixture(name, mode).spec, opt);
}

inline const LoopClass* class_with_labels(const ClassReport& r, const std::vector<int>& labels) {
  for (const auto& c : r.classes)
    if (c.reduced_labels == labels) return &c;
  return nullptr;
}

inline const LoopClass& only_essential(const ClassReport& r) {
  for (const auto& c : r.classes)
    if (c.kind == ClassKind::essential) return c;
  throw std::runtime_error("no essential class");
}

/// Weight vectors of every level-n interval by direct enumeration of the
/// words of length n, keyed by the interval's left endpoint. Each neighbour
/// position a of the interval collects p_sigma over the (word, integer shift)
/// pairs whose translated cylinder starts at left - a rho^n.
inline std::vector<Rational> brute_force_q(const TransitionDiagram& d, const Element& left, int node, int n) {
  const MeasureSpec& s = d.spec;
  const Field& f = *s.field;
  const CharVector& cv = d.nodes[node];
  Element scale = f.one();
  for (int i = 0; i < n; ++i) scale *= s.rho;

  std::vector<Rational> q(cv.neighbours.size(), 0);
  const std::size_t k = s.size();
  std::size_t words = 1;
  for (int i = 0; i < n; ++i) words *= k;
  int shift_lo = 0, shift_hi = 0;
  if (s.mode == Mode::torus) {
    shift_lo = -2;
    shift_hi = static_cast<int>(*s.delta.integer_value()) + 2;
  }
  for (std::size_t w = 0; w < words; ++w) {
    Element origin = f.zero(), step = f.one();
    Rational p = 1;
    std::size_t rest = w;
    for (int i = 0; i < n; ++i) {
      std::size_t j = rest % k;
      rest /= k;
      origin += step * s.digits[j];
      step *= s.rho;
      p *= s.probs[j];
    }
    for (int l = shift_lo; l <= shift_hi; ++l) {
      Element a = (left - origin + Rational(l)) / scale;
      for (std::size_t i = 0; i < cv.neighbours.size(); ++i)
        if (cv.neighbours[i] == a) q[i] += p;
    }
  }
  return q;
}

/// Bounds on mu([a, b]) for the line measure, by recursion to `depth` levels.
inline std::pair<Rational, Rational> interval_measure(const MeasureSpec& s, const Rational& a, const Rational& b,
                                                      int depth) {
  const Rational delta = s.delta.rational_value();
  if (b <= 0 || a >= delta) return {0, 0};
  if (a <= 0 && b >= delta) return {1, 1};
  if (depth == 0) return {0, 1};
  const Rational rho = s.rho.rational_value();
  Rational lo = 0, hi = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Rational dj = s.digits[j].rational_value();
    auto [l, h] = interval_measure(s, (a - dj) / rho, (b - dj) / rho, depth - 1);
    lo += s.probs[j] * l;
    hi += s.probs[j] * h;
  }
  return {lo, hi};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace locdim::testing
