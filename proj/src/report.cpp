#include "locdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace locdim {

using json = nlohmann::ordered_json;

std::string fmt(long double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << static_cast<double>(v);
  return os.str();
}

namespace {

std::string fmt_width(long double w) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(1) << static_cast<double>(w);
  return os.str();
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string labels_str(const std::vector<int>& labels) {
  std::vector<std::string> xs;
  for (int l : labels) xs.push_back(std::to_string(l));
  return "[" + join(xs, ", ") + "]";
}

std::string poly_str(const std::vector<Integer>& p) {
  std::vector<std::string> xs;
  for (const auto& c : p) xs.push_back(c.str());
  return join(xs, " ");
}

double num(long double v) { return static_cast<double>(v); }

json bracket_json(const DimBracket& b) {
  json j;
  j["lo"] = std::isinf(b.lo) ? json(nullptr) : json(num(b.lo));
  j["hi"] = std::isinf(b.hi) ? json(nullptr) : json(num(b.hi));
  return j;
}

}  // namespace

int Analysis::exit_code() const {
  if (diagram.truncated) return exit_truncated;
  for (const auto& c : classes.classes)
    if (c.positivity == Positivity::undecided) return exit_positivity_undecided;
  if (dims && dims->any_undecided()) return exit_isolation_undecided;
  return exit_ok;
}

Analysis analyze(const RawSpec& raw, const AnalyzeOptions& opt, const std::string& source) {
  Analysis a;
  a.source = source;
  RawSpec r = raw;
  if (opt.mode) r.mode = *opt.mode;
  a.validated = spec_validate(r);
  const MeasureSpec& spec = a.validated.spec;
  if (opt.cache_dir.empty()) {
    ClosureOptions co;
    co.caps = opt.caps;
    a.diagram = closure(spec, co);
  } else {
    a.diagram = cached_closure(spec, opt.caps, opt.cache_dir, &a.from_cache);
  }
  a.classes = loop_classes(a.diagram);
  annotate_classes(a.diagram, a.classes, opt.positivity_cap);
  if (a.diagram.truncated) {
    a.warnings.push_back("diagram truncated: " + a.diagram.truncation_reason + "; dimension analysis skipped");
  } else if (!a.diagram.has_matrices()) {
    a.warnings.push_back("no probabilities given; structure only");
  } else if (!a.classes.classes.empty()) {
    a.dims = isolated_report(a.diagram, a.classes, opt.dims);
    for (const auto& n : a.dims->notes) a.warnings.push_back(n);
    for (const auto& cd : a.dims->per_class)
      if (cd.outer)
        for (const auto& w : cd.outer->warnings)
          a.warnings.push_back("class " + a.classes.classes[cd.class_index].label() + ": " + w);
  }
  return a;
}

std::string node_label(const TransitionDiagram& d, int node) {
  std::string s = std::to_string(d.reduced_id[node] + 1);
  if (d.nodes[node].sibling != 1) s += "/" + std::to_string(d.nodes[node].sibling);
  return s;
}

std::string render_text(const Analysis& a) {
  const MeasureSpec& s = a.validated.spec;
  const SpecReport& rep = a.validated.report;
  const TransitionDiagram& d = a.diagram;
  std::ostringstream os;
  os << "spec: " << (a.source.empty() ? "<inline>" : a.source) << "\n";
  os << "mode: " << to_string(s.mode) << "\n";
  os << "contraction: root of [" << poly_str(s.field->integer_poly()) << "] near " << fmt(s.rho.approx(), 12) << "\n";
  std::vector<std::string> digits, probs;
  for (const auto& x : s.digits) digits.push_back(x.str());
  for (const auto& p : s.probs) probs.push_back(to_string(p));
  os << "digits: " << join(digits, ", ") << "\n";
  if (s.has_probs()) os << "probabilities: " << join(probs, ", ") << "\n";
  os << "delta: " << s.delta.str() << "\n";
  os << "pisot: " << to_string(rep.pisot.status) << (rep.pisot.reason.empty() ? "" : " (" + rep.pisot.reason + ")")
     << "\n";
  os << "regular probabilities: " << (rep.is_regular ? "yes" : "no") << "\n";
  os << "full support hull: " << (rep.full_support_hull ? "yes" : "no") << "\n";
  os << "strong separation: " << (rep.strong_separation ? "yes" : "no") << "\n";
  os << "characteristic vectors: " << d.size() << " full, " << d.reduced_count() << " reduced\n";
  os << "edges: " << d.edges.size() << "\n";
  os << "oracle questions: " << d.questions << "\n";
  if (d.truncated) {
    std::vector<std::string> w;
    for (int v : d.witness) w.push_back(node_label(d, v));
    os << "truncated: yes (" << d.truncation_reason << "), discovery path " << join(w, " -> ") << "\n";
  } else {
    os << "truncated: no\n";
  }
  os << "loop classes: " << a.classes.classes.size() << "\n";
  os << "essential classes: " << a.classes.essential_count << "\n";
  os << render_dims(a);
  for (const auto& w : a.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string render_dims(const Analysis& a) {
  const TransitionDiagram& d = a.diagram;
  std::ostringstream os;
  for (std::size_t i = 0; i < a.classes.classes.size(); ++i) {
    const LoopClass& c = a.classes.classes[i];
    os << "class " << c.label() << ": " << to_string(c.kind) << (c.simple_cycle ? ", simple loop" : "") << ", "
       << c.nodes.size() << " full vectors, positivity " << to_string(c.positivity);
    if (c.positivity == Positivity::positive) os << " via " << labels_str(path_labels(d, c.witness_edges));
    os << "\n";
    if (!a.dims) continue;
    const ClassDims& cd = a.dims->per_class[i];
    if (cd.inner) {
      const InnerInterval& in = *cd.inner;
      os << "  inner dims [" << fmt(in.low_dim.dim.lo) << ", " << fmt(in.high_dim.dim.hi) << "] widths "
         << fmt_width(in.low_dim.dim.width()) << ", " << fmt_width(in.high_dim.dim.width()) << "; loops "
         << labels_str(path_labels(d, in.low_dim.cycle)) << " and " << labels_str(path_labels(d, in.high_dim.cycle))
         << "; " << in.walks << " closed walks up to length " << in.max_len << (in.partial ? " (partial)" : "")
         << "\n";
    }
    if (cd.outer) {
      const OuterInterval& o = *cd.outer;
      DimBracket b = o.dims();
      os << "  outer dims [" << fmt(b.lo) << ", " << fmt(b.hi) << "] from exact norms; depths (" << o.depth_lo << ", "
         << o.depth_hi << "), lower bound " << (o.lower_available ? o.convention.str() : std::string("unavailable"))
         << "\n";
      os << "  spectral range within [" << fmt(o.spectral_lo) << ", " << fmt(o.spectral_hi) << "] per step, scaled ["
         << fmt(o.spectral_lo * std::exp(log_integer(o.scale))) << ", "
         << fmt(o.spectral_hi * std::exp(log_integer(o.scale))) << "]\n";
    }
  }
  if (a.dims) {
    os << "candidates:\n";
    for (const auto& c : a.dims->candidates) {
      os << "  " << a.classes.classes[c.class_index].label() << " dims [" << fmt(c.dims.lo) << ", " << fmt(c.dims.hi)
         << "] width " << fmt_width(c.dims.width()) << ": " << to_string(c.verdict) << "\n";
    }
    std::vector<long double> iso;
    for (const auto& c : a.dims->candidates) {
      if (c.verdict != Verdict::isolated || c.dims.width() > 1e-9L) continue;
      long double v = c.dims.mid();
      if (std::none_of(iso.begin(), iso.end(), [&](long double w) { return std::abs(w - v) < 1e-9L; }))
        iso.push_back(v);
    }
    std::sort(iso.begin(), iso.end());
    std::vector<std::string> xs;
    for (auto v : iso) xs.push_back(fmt(v));
    os << "isolated {" << join(xs, ", ") << "}\n";
  }
  return os.str();
}

std::string render_matrices(const TransitionDiagram& d) {
  std::ostringstream os;
  if (!d.has_matrices()) return "no probabilities; no matrices\n";
  Integer scale = d.spec.prob_scale();
  for (const auto& e : d.edges) {
    os << "T(" << node_label(d, e.parent) << "," << node_label(d, e.child) << ") position " << e.position << "\n";
    os << "  true   " << to_string(e.matrix) << "\n";
    os << "  x" << scale.str() << " " << to_string(RatMatrix(e.matrix * Rational(scale))) << "\n";
  }
  return os.str();
}

json to_json(const Analysis& a) {
  const MeasureSpec& s = a.validated.spec;
  const SpecReport& rep = a.validated.report;
  const TransitionDiagram& d = a.diagram;
  json j;
  j["schema_version"] = kSchemaVersion;
  json spec;
  std::vector<std::string> poly, digits, probs;
  for (const auto& c : s.field->integer_poly()) poly.push_back(c.str());
  for (const auto& x : s.digits) digits.push_back(x.str());
  for (const auto& p : s.probs) probs.push_back(to_string(p));
  spec["min_poly"] = poly;
  spec["rho"] = num(s.rho.approx());
  spec["digits"] = digits;
  spec["probs"] = probs;
  spec["mode"] = to_string(s.mode);
  spec["delta"] = s.delta.str();
  j["spec"] = spec;
  j["checks"] = {{"pisot", to_string(rep.pisot.status)},
                 {"regular", rep.is_regular},
                 {"full_support_hull", rep.full_support_hull},
                 {"strong_separation", rep.strong_separation}};
  json dj;
  dj["nodes"] = d.size();
  dj["reduced"] = d.reduced_count();
  dj["edges"] = d.edges.size();
  dj["questions"] = d.questions;
  dj["truncated"] = d.truncated;
  dj["truncation_reason"] = d.truncation_reason;
  std::vector<std::string> witness;
  for (int v : d.witness) witness.push_back(node_label(d, v));
  dj["witness"] = witness;
  j["diagram"] = dj;
  json classes = json::array();
  for (const auto& c : a.classes.classes) {
    json cj;
    cj["labels"] = c.reduced_labels;
    cj["nodes"] = c.nodes;
    cj["kind"] = to_string(c.kind);
    cj["simple_cycle"] = c.simple_cycle;
    cj["positivity"] = to_string(c.positivity);
    cj["positivity_witness"] = path_labels(d, c.witness_edges);
    cj["row_nonzero"] = c.row_nonzero;
    classes.push_back(cj);
  }
  j["classes"] = classes;
  j["essential_count"] = a.classes.essential_count;
  if (a.dims) {
    json per = json::array();
    for (const auto& cd : a.dims->per_class) {
      json cj;
      cj["class"] = cd.class_index;
      if (cd.inner) {
        const InnerInterval& in = *cd.inner;
        json ij = bracket_json(in.dims());
        ij["lo_width"] = num(in.low_dim.dim.width());
        ij["hi_width"] = num(in.high_dim.dim.width());
        ij["max_len"] = in.max_len;
        ij["walks"] = in.walks;
        ij["partial"] = in.partial;
        ij["witness_lo"] = path_labels(d, in.low_dim.cycle);
        ij["witness_hi"] = path_labels(d, in.high_dim.cycle);
        cj["inner"] = ij;
      }
      if (cd.outer) {
        const OuterInterval& o = *cd.outer;
        json oj = bracket_json(o.dims());
        oj["depth_lo"] = o.depth_lo;
        oj["depth_hi"] = o.depth_hi;
        oj["convention"] = o.convention.str();
        oj["lower_available"] = o.lower_available;
        oj["scale"] = o.scale.str();
        oj["lower_norm"] = o.lower_norm.str();
        oj["upper_norm"] = o.upper_norm.str();
        oj["warnings"] = o.warnings;
        cj["outer"] = oj;
      }
      per.push_back(cj);
    }
    json cands = json::array();
    for (const auto& c : a.dims->candidates) {
      json cj = bracket_json(c.dims);
      cj = json{{"class", c.class_index}, {"lo", cj["lo"]}, {"hi", cj["hi"]}, {"verdict", to_string(c.verdict)},
                {"detail", c.detail}};
      cands.push_back(cj);
    }
    j["dims"] = {{"classes", per}, {"candidates", cands}};
  } else {
    j["dims"] = nullptr;
  }
  j["warnings"] = a.warnings;
  j["exit_code"] = a.exit_code();
  return j;
}

std::string to_dot(const TransitionDiagram& d, const ClassReport* classes) {
  std::ostringstream os;
  os << "digraph transitions {\n  rankdir=TB;\n  node [shape=circle, fontsize=10];\n";
  std::set<int> witness(d.witness.begin(), d.witness.end());
  for (std::size_t v = 0; v < d.size(); ++v) {
    os << "  n" << v << " [label=\"" << node_label(d, static_cast<int>(v)) << "\"";
    if (classes && classes->membership[v] >= 0) {
      const LoopClass& c = classes->classes[classes->membership[v]];
      if (c.kind == ClassKind::essential)
        os << ", style=filled, fillcolor=\"#d0d0d0\"";
      else
        os << ", style=dashed";
    }
    if (witness.count(static_cast<int>(v))) os << ", color=red";
    if (!d.expanded[v]) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (const auto& e : d.edges) os << "  n" << e.parent << " -> n" << e.child << " [label=\"" << e.position << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\r\n";
}

std::string classes_csv(const Analysis& a) {
  std::string out = csv_row({"labels", "kind", "positivity", "inner_lo", "inner_hi", "outer_lo", "outer_hi",
                             "witness_lo", "witness_hi", "convention"});
  for (std::size_t i = 0; i < a.classes.classes.size(); ++i) {
    const LoopClass& c = a.classes.classes[i];
    std::vector<std::string> row{c.label(), to_string(c.kind), to_string(c.positivity)};
    const ClassDims* cd = a.dims ? &a.dims->per_class[i] : nullptr;
    if (cd && cd->inner) {
      row.push_back(fmt(cd->inner->dims().lo));
      row.push_back(fmt(cd->inner->dims().hi));
    } else {
      row.insert(row.end(), {"", ""});
    }
    if (cd && cd->outer) {
      row.push_back(fmt(cd->outer->dims().lo));
      row.push_back(fmt(cd->outer->dims().hi));
    } else {
      row.insert(row.end(), {"", ""});
    }
    if (cd && cd->inner) {
      row.push_back(labels_str(path_labels(a.diagram, cd->inner->low_dim.cycle)));
      row.push_back(labels_str(path_labels(a.diagram, cd->inner->high_dim.cycle)));
    } else {
      row.insert(row.end(), {"", ""});
    }
    row.push_back(cd && cd->outer ? cd->outer->convention.str() : "");
    out += csv_row(row);
  }
  return out;
}

std::string dims_csv(const Analysis& a) {
  std::string out = csv_row({"class", "dim_lo", "dim_hi", "verdict", "detail"});
  if (!a.dims) return out;
  for (const auto& c : a.dims->candidates)
    out += csv_row({a.classes.classes[c.class_index].label(), fmt(c.dims.lo), fmt(c.dims.hi), to_string(c.verdict),
                    c.detail});
  return out;
}

std::string table_csv(const std::vector<ShrinkRow>& rows) {
  std::string out = csv_row({"m", "d", "line_lower_bound", "torus_upper_bound", "holds", "depth", "flags"});
  for (const auto& r : rows)
    out += csv_row({std::to_string(r.m), std::to_string(r.d), fmt(r.line), fmt(r.torus), r.holds ? "true" : "false",
                    std::to_string(r.depth), join(r.flags, "; ")});
  return out;
}

json to_json(const PointResult& p, const TransitionDiagram& d) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["boundary"] = p.boundary;
  j["exact"] = p.exact;
  j["dim"] = bracket_json(p.dim);
  json paths = json::array();
  for (const auto& path : p.paths) {
    json pj;
    pj["depth"] = path.depth;
    pj["labels"] = path_labels(d, path.edges);
    pj["estimate"] = num(path.estimate);
    pj["estimate_adjacent"] = num(path.estimate_adjacent);
    if (path.periodic) {
      pj["preamble"] = path_labels(d, path.preamble);
      pj["cycle"] = path_labels(d, path.periodic->cycle);
      pj["periodic_dim"] = bracket_json(path.periodic->dim);
    }
    paths.push_back(pj);
  }
  j["paths"] = paths;
  return j;
}

json to_json(const std::vector<ShrinkRow>& rows) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"m", r.m},
                   {"d", r.d},
                   {"line", num(r.line)},
                   {"torus", num(r.torus)},
                   {"holds", r.holds},
                   {"depth", r.depth},
                   {"flags", r.flags}});
  j["rows"] = arr;
  return j;
}

}  // namespace locdim
