#include "locdim/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace locdim;
namespace fs = std::filesystem;

namespace {

struct PipelineFlags {
  std::string spec_path;
  std::string mode;
  std::size_t max_nodes = Caps{}.max_nodes;
  int max_depth = Caps{}.max_depth;
  std::size_t max_questions = Caps{}.max_questions;
  int cycle_len = DimsOptions{}.cycle_len;
  std::vector<int> norm_depths;
  std::string norm;  // "column" or "row": fixes the lower-bound convention
  std::vector<int> positions;
  bool no_search = false;
  std::size_t path_cap = OuterOptions{}.path_cap;
  std::size_t positivity_cap = 200000;
  std::string cache_dir;
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& f, bool dims_flags) {
  app->add_option("spec", f.spec_path, "Spec file")->required()->check(CLI::ExistingFile);
  app->add_option("--mode", f.mode, "Override the spec mode")->check(CLI::IsMember({"line", "torus"}));
  app->add_option("--max-nodes", f.max_nodes, "Closure node cap");
  app->add_option("--max-depth", f.max_depth, "Closure depth cap");
  app->add_option("--max-questions", f.max_questions, "Intersection-oracle question cap");
  app->add_option("--cache", f.cache_dir, "Directory for the diagram and oracle cache");
  if (!dims_flags) return;
  app->add_option("--cycle-len", f.cycle_len, "Longest closed walk for inner intervals");
  app->add_option("--norm-depths", f.norm_depths, "Path lengths for the outer lower and upper bounds")
      ->expected(2);
  app->add_option("--norm", f.norm, "Fix the lower-bound norm instead of searching")
      ->check(CLI::IsMember({"column", "row"}));
  app->add_option("--positions", f.positions, "1-based neighbour positions for --norm (principal submatrix)")
      ->delimiter(',');
  app->add_flag("--no-search", f.no_search, "Use the full min-column norm without searching");
  app->add_option("--path-cap", f.path_cap, "Most paths enumerated per outer bound");
  app->add_option("--positivity-cap", f.positivity_cap, "Most support patterns explored per class");
}

AnalyzeOptions options_from(const PipelineFlags& f) {
  AnalyzeOptions o;
  if (!f.mode.empty()) o.mode = parse_mode(f.mode);
  o.caps.max_nodes = f.max_nodes;
  o.caps.max_depth = f.max_depth;
  o.caps.max_questions = f.max_questions;
  o.dims.cycle_len = f.cycle_len;
  if (f.norm_depths.size() == 2) {
    o.dims.outer.depth_lo = f.norm_depths[0];
    o.dims.outer.depth_hi = f.norm_depths[1];
  }
  o.dims.outer.path_cap = f.path_cap;
  if (f.no_search || !f.norm.empty()) o.dims.outer.search = false;
  if (!f.norm.empty()) {
    OuterConvention c;
    c.norm = f.norm == "row" ? LowerNorm::min_row : LowerNorm::min_column;
    for (int p : f.positions) c.positions.push_back(p - 1);
    o.dims.outer.convention = c;
  }
  o.positivity_cap = f.positivity_cap;
  o.cache_dir = f.cache_dir;
  return o;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

Element parse_point(const MeasureSpec& s, const std::string& text) {
  return parse_element(s.field, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local dimensions of self-similar measures of finite type"};
  app.require_subcommand(1);

  PipelineFlags analyze_flags, dims_flags, diagram_flags, point_flags;
  std::string out_dir;
  bool as_json = false, with_matrices = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Full pipeline with report and artifacts");
  add_pipeline_flags(analyze_cmd, analyze_flags, true);
  analyze_cmd->add_option("--out", out_dir, "Directory for report, DOT, CSV and JSON artifacts");
  analyze_cmd->add_flag("--json", as_json, "Print the result document instead of the text report");
  analyze_cmd->add_flag("--matrices", with_matrices, "Append every transition matrix to the text report");

  auto* dims_cmd = app.add_subcommand("dims", "Interval bounds and isolated-point verdicts");
  add_pipeline_flags(dims_cmd, dims_flags, true);

  std::string dot_path;
  auto* diagram_cmd = app.add_subcommand("diagram", "Transition diagram as DOT");
  add_pipeline_flags(diagram_cmd, diagram_flags, false);
  diagram_cmd->add_option("-o,--output", dot_path, "Output file (default stdout)");

  std::string point_x;
  int point_depth = 40;
  bool point_json = false;
  auto* point_cmd = app.add_subcommand("point", "Local dimension estimate at a point");
  add_pipeline_flags(point_cmd, point_flags, false);
  point_cmd->add_option("x", point_x, "Point, a rational or a polynomial in r")->required();
  point_cmd->add_option("--depth", point_depth, "Descent depth");
  point_cmd->add_flag("--json", point_json, "Print JSON");

  std::vector<int> d_range{3, 6}, m_range{2, 6};
  std::vector<std::vector<int>> pairs;
  int depth_cap = 4;
  std::string table_out;
  bool table_json = false;
  auto* table_cmd = app.add_subcommand("cantor-table", "Line and torus sup-dimension bounds for Cantor convolutions");
  table_cmd->add_option("--d", d_range, "Range of d, inclusive")->expected(2);
  table_cmd->add_option("--m", m_range, "Range of m, inclusive; rows need m >= d - 1")->expected(2);
  table_cmd->add_option("--pair", pairs, "Explicit (m, d) pair, repeatable")->expected(2)->allow_extra_args(false);
  table_cmd->add_option("--depth-cap", depth_cap, "Deepest word length searched");
  table_cmd->add_option("-o,--output", table_out, "CSV output file (default stdout)");
  table_cmd->add_flag("--json", table_json, "Print JSON");

  std::vector<std::string> poly_text;
  std::string pisot_spec;
  auto* pisot_cmd = app.add_subcommand("check-pisot", "Pisot test for an integer polynomial or a spec's 1/rho");
  pisot_cmd->add_option("coeffs", poly_text, "Integer coefficients, constant term first");
  pisot_cmd->add_option("--spec", pisot_spec, "Spec file; tests 1/rho")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string spec_in_use;
  for (const auto* f : {&analyze_flags, &dims_flags, &diagram_flags, &point_flags})
    if (!f->spec_path.empty()) spec_in_use = f->spec_path;
  if (!pisot_spec.empty()) spec_in_use = pisot_spec;

  try {
    if (*analyze_cmd || *dims_cmd) {
      const PipelineFlags& f = *analyze_cmd ? analyze_flags : dims_flags;
      Analysis a = analyze(parse_spec_file(f.spec_path), options_from(f), f.spec_path);
      if (*dims_cmd) {
        std::cout << render_dims(a);
        for (const auto& w : a.warnings) std::cout << "warning: " << w << "\n";
        return a.exit_code();
      }
      std::string text = render_text(a);
      if (with_matrices) text += "matrices:\n" + render_matrices(a.diagram);
      std::string doc = to_json(a).dump(2) + "\n";
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "report.txt", text);
        write_text(fs::path(out_dir) / "matrices.txt", render_matrices(a.diagram));
        write_text(fs::path(out_dir) / "diagram.dot", to_dot(a.diagram, &a.classes));
        write_text(fs::path(out_dir) / "classes.csv", classes_csv(a));
        write_text(fs::path(out_dir) / "dims.csv", dims_csv(a));
        write_text(fs::path(out_dir) / "result.json", doc);
      }
      std::cout << (as_json ? doc : text);
      return a.exit_code();
    }
    if (*diagram_cmd) {
      AnalyzeOptions o = options_from(diagram_flags);
      RawSpec raw = parse_spec_file(diagram_flags.spec_path);
      if (o.mode) raw.mode = *o.mode;
      Validated v = spec_validate(raw);
      TransitionDiagram d = o.cache_dir.empty() ? closure(v.spec, ClosureOptions{o.caps, {}, nullptr})
                                                : cached_closure(v.spec, o.caps, o.cache_dir);
      ClassReport classes = loop_classes(d);
      std::string dot = to_dot(d, &classes);
      if (dot_path.empty())
        std::cout << dot;
      else
        write_text(dot_path, dot);
      return d.truncated ? exit_truncated : exit_ok;
    }
    if (*point_cmd) {
      AnalyzeOptions o = options_from(point_flags);
      RawSpec raw = parse_spec_file(point_flags.spec_path);
      if (o.mode) raw.mode = *o.mode;
      Validated v = spec_validate(raw);
      TransitionDiagram d = o.cache_dir.empty() ? closure(v.spec, ClosureOptions{o.caps, {}, nullptr})
                                                : cached_closure(v.spec, o.caps, o.cache_dir);
      if (d.truncated) {
        std::cerr << "diagram truncated: " << d.truncation_reason << "\n";
        return exit_truncated;
      }
      PointResult p = point_symbolic(d, parse_point(v.spec, point_x), point_depth);
      if (point_json) {
        std::cout << to_json(p, d).dump(2) << "\n";
        return exit_ok;
      }
      std::cout << "x: " << point_x << "\n";
      std::cout << (p.exact ? "exact dim " : "estimate ") << fmt(p.dim.mid()) << " width " << fmt(p.dim.width(), 12)
                << (p.boundary ? " (two representations)" : "") << "\n";
      for (const auto& path : p.paths) {
        std::cout << "  path depth " << path.depth << ": estimate " << fmt(path.estimate) << ", with adjacent "
                  << fmt(path.estimate_adjacent);
        if (path.periodic) {
          std::cout << ", periodic after " << path.preamble.size() << " steps, loop [";
          auto labels = path_labels(d, path.periodic->cycle);
          for (std::size_t i = 0; i < labels.size(); ++i) std::cout << (i ? ", " : "") << labels[i];
          std::cout << "] dim " << fmt(path.periodic->dim.mid());
        }
        std::cout << "\n";
      }
      return exit_ok;
    }
    if (*table_cmd) {
      std::vector<std::pair<int, int>> todo;
      if (!pairs.empty()) {
        for (const auto& p : pairs) todo.emplace_back(p[0], p[1]);
      } else {
        for (int d = d_range[0]; d <= d_range[1]; ++d)
          for (int m = std::max(m_range[0], d - 1); m <= m_range[1]; ++m) todo.emplace_back(m, d);
      }
      auto rows = shrink_table(todo, depth_cap);
      std::string out = table_json ? to_json(rows).dump(2) + "\n" : table_csv(rows);
      if (table_out.empty())
        std::cout << out;
      else
        write_text(table_out, out);
      return exit_ok;
    }
    if (*pisot_cmd) {
      std::vector<Integer> poly;
      if (!pisot_spec.empty()) {
        Validated v = spec_validate(parse_spec_file(pisot_spec));
        poly = inverse_poly(*v.spec.field);
      } else {
        if (poly_text.empty()) throw std::invalid_argument("give coefficients or --spec");
        for (const auto& c : poly_text) poly.push_back(Integer(c));
      }
      PisotCertificate cert = nf_is_pisot(poly);
      std::cout << "pisot: " << to_string(cert.status) << "\n";
      if (!cert.reason.empty()) std::cout << "reason: " << cert.reason << "\n";
      std::cout << "precision bits: " << cert.bits << "\n";
      for (const auto& r : cert.roots)
        std::cout << "  root " << r.center.real() << (r.center.imag() < 0 ? " - " : " + ") << std::abs(r.center.imag())
                  << "i, radius " << r.radius << "\n";
      return cert.status == PisotStatus::pisot ? exit_ok : exit_error;
    }
  } catch (const ParseError& e) {
    std::cerr << spec_in_use << ":" << e.line << ":" << e.column << ": " << e.what() << "\n";
    return exit_input;
  } catch (const SpecError& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_ok;
}
