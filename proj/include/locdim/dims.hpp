#pragma once

#include "locdim/classes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace locdim {

struct DimsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed interval of local-dimension values, with the width it was computed to.
struct DimBracket {
  long double lo = 0, hi = 0;
  long double mid() const { return (lo + hi) / 2; }
  long double width() const { return hi > lo ? hi - lo : 0; }
};

long double log_rho(const MeasureSpec& s);

/// Dimension bracket for per-step spectral values in [lo, hi] (true probabilities).
DimBracket dims_from_spectral(const MeasureSpec& s, long double spectral_lo, long double spectral_hi);

struct PeriodicDim {
  std::vector<int> cycle;  // edge indices, closing up
  int length = 0;
  RatMatrix product;       // true-probability product along the cycle
  SpectralBracket sp;
  long double per_step = 0;         // sp^(1/length)
  long double per_step_scaled = 0;  // same, with matrices scaled by lcm of denominators
  DimBracket dim;
};

PeriodicDim periodic_dim(const TransitionDiagram& d, const std::vector<int>& cycle);

struct InnerInterval {
  PeriodicDim low_dim;   // largest per-step spectral value
  PeriodicDim high_dim;  // smallest per-step spectral value
  std::size_t walks = 0;
  int max_len = 0;
  bool partial = false;
  DimBracket dims() const { return {low_dim.dim.lo, high_dim.dim.hi}; }
};

/// Spectral range over admissible closed walks of length <= max_len inside the class.
InnerInterval inner_interval(const TransitionDiagram& d, const LoopClass& c, int max_len,
                             std::size_t walk_cap = 20'000'000);

enum class LowerNorm { min_column, min_row };
std::string to_string(LowerNorm n);

/// How the lower spectral bound restricts path products. Empty `positions`
/// means the whole (possibly rectangular) matrix; otherwise the principal
/// submatrix on those 0-based neighbour positions, shared by every node.
struct OuterConvention {
  LowerNorm norm = LowerNorm::min_column;
  std::vector<int> positions;
  std::string str() const;
};

struct OuterOptions {
  int depth_lo = 20;  // path length for the lower spectral bound
  int depth_hi = 10;  // path length for the upper spectral bound
  std::optional<OuterConvention> convention;  // fixed convention; default full min column
  bool search = true;  // maximize the lower bound over all conventions
  std::size_t path_cap = 50'000'000;
};

struct OuterInterval {
  int depth_lo = 0, depth_hi = 0;
  OuterConvention convention;
  Integer scale = 1;
  Integer lower_norm = 0, upper_norm = 0;  // scaled integer norms
  long double spectral_lo = 0, spectral_hi = 0;  // per step, true probabilities
  bool lower_available = false;
  long double log_rho = 0;
  std::vector<std::string> warnings;
  DimBracket dims() const;
  /// Per-step bounds as 1x1 matrices with their step counts, for exact comparison.
  RatMatrix lower_matrix() const;
  RatMatrix upper_matrix() const;
};

OuterInterval outer_interval(const TransitionDiagram& d, const LoopClass& c, const OuterOptions& opt);

/// Exact containment of the inner spectral range in the outer one.
bool inner_within_outer(const TransitionDiagram& d, const InnerInterval& in, const OuterInterval& out);

/// Closed form [log max p / log rho, log min p / log rho] under strong separation.
DimBracket sss_interval(const Validated& v);

enum class Verdict { isolated, inside, undecided };
std::string to_string(Verdict v);

struct ClassDims {
  int class_index = 0;
  std::optional<InnerInterval> inner;
  std::optional<OuterInterval> outer;
};

struct Candidate {
  int class_index = 0;
  DimBracket dims;
  Verdict verdict = Verdict::undecided;
  std::string detail;
};

struct DimsOptions {
  int cycle_len = 6;
  OuterOptions outer;
};

struct DimensionReport {
  std::vector<ClassDims> per_class;
  std::vector<Candidate> candidates;
  std::vector<std::string> notes;  // classes whose inner interval could not be formed
  bool any_undecided() const;
};

DimensionReport isolated_report(const TransitionDiagram& d, const ClassReport& classes, const DimsOptions& opt);

// ------------------------------------------------------------ point estimates

struct PointPath {
  std::vector<int> edges;
  int depth = 0;
  long double estimate = 0;           // log ||T(path)|| / (n log rho)
  long double estimate_adjacent = 0;  // log of the three-interval sum / (n log rho)
  std::optional<PeriodicDim> periodic;
  std::vector<int> preamble;          // edges before the repeating cycle
  Element offset;                     // position of x in the final interval frame
};

struct PointResult {
  std::vector<PointPath> paths;  // two entries when x is a net-interval endpoint
  bool boundary = false;
  bool exact = false;
  DimBracket dim;  // periodic value when exact, else the estimate
};

PointResult point_symbolic(const TransitionDiagram& d, const Element& x, int depth);

}  // namespace locdim
