#pragma once

#include "locdim/cantor.hpp"
#include "locdim/dims.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace locdim {

inline constexpr int kSchemaVersion = 1;

/// Process exit codes; a function of the run's flags only.
enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,
  exit_input = 2,                 // parse or validation failure
  exit_truncated = 3,             // closure hit a cap
  exit_positivity_undecided = 4,  // a positivity search hit its cap
  exit_isolation_undecided = 5,   // an isolated-point verdict is undecided
};

struct AnalyzeOptions {
  std::optional<Mode> mode;  // overrides the spec file
  Caps caps;
  DimsOptions dims;
  std::size_t positivity_cap = 200000;
  std::string cache_dir;  // empty disables the cache
};

struct Analysis {
  std::string source;  // spec path, for display
  Validated validated;
  TransitionDiagram diagram;
  ClassReport classes;
  std::optional<DimensionReport> dims;
  bool from_cache = false;
  std::vector<std::string> warnings;

  int exit_code() const;
};

Analysis analyze(const RawSpec& raw, const AnalyzeOptions& opt, const std::string& source = "");

/// Label of a node: reduced id from 1, with the sibling rank when it is not 1.
std::string node_label(const TransitionDiagram& d, int node);

std::string render_text(const Analysis& a);
/// Per-class intervals and candidate verdicts only.
std::string render_dims(const Analysis& a);
/// Every edge matrix, with true probabilities and scaled by the common denominator.
std::string render_matrices(const TransitionDiagram& d);
nlohmann::ordered_json to_json(const Analysis& a);
std::string to_dot(const TransitionDiagram& d, const ClassReport* classes = nullptr);

std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);
std::string classes_csv(const Analysis& a);
std::string dims_csv(const Analysis& a);
std::string table_csv(const std::vector<ShrinkRow>& rows);

nlohmann::ordered_json to_json(const PointResult& p, const TransitionDiagram& d);
nlohmann::ordered_json to_json(const std::vector<ShrinkRow>& rows);

/// Fixed-point text with `digits` decimals; "inf" for infinities.
std::string fmt(long double v, int digits = 9);

// ------------------------------------------------------------ cache

/// Stable 64-bit FNV-1a hash, hex encoded.
std::string content_hash(const std::string& text);

/// Cache key of a closure run: the spec's canonical text and the caps.
std::string diagram_key(const MeasureSpec& spec, const Caps& caps);

std::string serialize_diagram(const TransitionDiagram& d, const std::vector<std::pair<KOracle::Key, bool>>& memo);
/// Rebuilds a diagram for `spec`; throws on a malformed or mismatched document.
TransitionDiagram deserialize_diagram(const MeasureSpec& spec, const std::string& text);

/// Closure through the on-disk cache in `dir` (created on demand).
TransitionDiagram cached_closure(const MeasureSpec& spec, const Caps& caps, const std::string& dir, bool* hit = nullptr);

}  // namespace locdim
