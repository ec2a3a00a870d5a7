#pragma once

#include "locdim/numberfield.hpp"

#include <map>
#include <string>
#include <vector>

namespace locdim {

enum class Mode { line, torus };
std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unvalidated input: what a spec file or a builder provides.
struct RawSpec {
  FieldPtr field;
  std::vector<Element> digits;  // increasing, any translation
  std::vector<Rational> probs;  // empty for structure-only analysis
  Mode mode = Mode::torus;
};

/// Equicontractive IFS x -> rho x + d_j with d_0 = 0 < d_1 < ... < d_k.
struct MeasureSpec {
  FieldPtr field;
  Element rho;
  std::vector<Element> digits;
  std::vector<Rational> probs;
  Mode mode = Mode::torus;
  Element delta;

  bool has_probs() const { return !probs.empty(); }
  std::size_t size() const { return digits.size(); }
  /// Least common multiple of the probability denominators (1 without probs).
  Integer prob_scale() const;
};

struct SpecReport {
  Element delta;
  bool is_regular = false;
  bool full_support_hull = false;
  bool strong_separation = false;
  PisotCertificate pisot;
};

struct Validated {
  MeasureSpec spec;
  SpecReport report;
};

Validated spec_validate(const RawSpec& raw);

/// m-fold convolution of the uniform two-map spec {0, 1 - rho}.
MeasureSpec spec_convolve(const MeasureSpec& base, int m);

/// Cantor-like spec: rho = 1/d, digits j(d-1)/d for j in lambda.
MeasureSpec spec_cantor(int d, int k, const std::vector<int>& lambda, const std::vector<Rational>& probs,
                        Mode mode = Mode::torus);

/// Binomial probabilities C(m, j) / 2^m, j = 0..m.
std::vector<Rational> binomial_probs(int m);

// ------------------------------------------------------------ spec files

/// Polynomial in the field generator, e.g. "2 - 2r", "3/5", "r^2 + 1/8".
Element parse_element(const FieldPtr& f, const std::string& text);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column);
  int line, column;
};

/// Reads the section/key-value spec format documented in the README.
RawSpec parse_spec_text(const std::string& text);
RawSpec parse_spec_file(const std::string& path);

/// Canonical text of a validated spec, stable across runs; used for hashing.
std::string canonical_text(const MeasureSpec& s);

}  // namespace locdim
