#include "locdim/report.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace locdim {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr int kCacheVersion = 1;

json element_json(const Element& x) {
  json a = json::array();
  for (const auto& c : x.coeffs()) a.push_back(to_string(c));
  return a;
}

Element element_from(const MeasureSpec& s, const json& a) {
  std::vector<Rational> c;
  for (const auto& v : a) c.push_back(parse_rational(v.get<std::string>()));
  return s.field->from_coeffs(std::move(c));
}

json matrix_json(const RatMatrix& m) {
  json e = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) e.push_back(to_string(m(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

RatMatrix matrix_from(const json& j) {
  RatMatrix m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const auto& e = j.at("entries");
  if (static_cast<Eigen::Index>(e.size()) != m.rows() * m.cols()) throw std::runtime_error("matrix size mismatch");
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = parse_rational(e[k++].get<std::string>());
  return m;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

json memo_json(const std::vector<std::pair<KOracle::Key, bool>>& memo) {
  json a = json::array();
  for (const auto& [k, v] : memo) a.push_back({element_json(k.first), element_json(k.second), v});
  return a;
}

std::vector<std::pair<KOracle::Key, bool>> memo_from(const MeasureSpec& s, const json& a) {
  std::vector<std::pair<KOracle::Key, bool>> out;
  for (const auto& q : a) out.push_back({{element_from(s, q.at(0)), element_from(s, q.at(1))}, q.at(2).get<bool>()});
  return out;
}

}  // namespace

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string diagram_key(const MeasureSpec& spec, const Caps& caps) {
  std::ostringstream os;
  os << canonical_text(spec) << "\ncaps " << caps.max_nodes << " " << caps.max_depth << " " << caps.max_questions;
  return content_hash(os.str());
}

std::string serialize_diagram(const TransitionDiagram& d, const std::vector<std::pair<KOracle::Key, bool>>& memo) {
  json j;
  j["cache_version"] = kCacheVersion;
  j["spec"] = content_hash(canonical_text(d.spec));
  json nodes = json::array();
  for (std::size_t v = 0; v < d.size(); ++v) {
    json nb = json::array();
    for (const auto& x : d.nodes[v].neighbours) nb.push_back(element_json(x));
    nodes.push_back({{"length", element_json(d.nodes[v].length)},
                     {"neighbours", nb},
                     {"sibling", d.nodes[v].sibling},
                     {"depth", d.depth[v]},
                     {"reduced", d.reduced_id[v]},
                     {"expanded", static_cast<bool>(d.expanded[v])},
                     {"parent", d.tree_parent[v]}});
  }
  j["nodes"] = nodes;
  j["reduced_rep"] = d.reduced_rep;
  json edges = json::array();
  for (const auto& e : d.edges)
    edges.push_back({{"parent", e.parent},
                     {"child", e.child},
                     {"position", e.position},
                     {"left", element_json(e.left)},
                     {"right", element_json(e.right)},
                     {"matrix", matrix_json(e.matrix)}});
  j["edges"] = edges;
  j["root"] = d.root;
  j["truncated"] = d.truncated;
  j["truncation_reason"] = d.truncation_reason;
  j["witness"] = d.witness;
  j["questions"] = d.questions;
  j["memo"] = memo_json(memo);
  return j.dump();
}

TransitionDiagram deserialize_diagram(const MeasureSpec& spec, const std::string& text) {
  json j = json::parse(text);
  if (j.at("cache_version").get<int>() != kCacheVersion) throw std::runtime_error("cache version mismatch");
  if (j.at("spec").get<std::string>() != content_hash(canonical_text(spec)))
    throw std::runtime_error("cache entry belongs to another spec");
  TransitionDiagram d;
  d.spec = spec;
  for (const auto& n : j.at("nodes")) {
    CharVector cv;
    cv.length = element_from(spec, n.at("length"));
    for (const auto& x : n.at("neighbours")) cv.neighbours.push_back(element_from(spec, x));
    cv.sibling = n.at("sibling").get<int>();
    d.nodes.push_back(std::move(cv));
    d.depth.push_back(n.at("depth").get<int>());
    d.reduced_id.push_back(n.at("reduced").get<int>());
    d.expanded.push_back(n.at("expanded").get<bool>());
    d.tree_parent.push_back(n.at("parent").get<int>());
  }
  d.reduced_rep = j.at("reduced_rep").get<std::vector<int>>();
  d.out.assign(d.nodes.size(), {});
  for (const auto& e : j.at("edges")) {
    ChildEdge ce;
    ce.parent = e.at("parent").get<int>();
    ce.child = e.at("child").get<int>();
    ce.position = e.at("position").get<int>();
    ce.left = element_from(spec, e.at("left"));
    ce.right = element_from(spec, e.at("right"));
    ce.matrix = matrix_from(e.at("matrix"));
    if (ce.parent < 0 || ce.parent >= static_cast<int>(d.size()) || ce.child < 0 ||
        ce.child >= static_cast<int>(d.size()))
      throw std::runtime_error("cache edge out of range");
    d.out[ce.parent].push_back(static_cast<int>(d.edges.size()));
    d.edges.push_back(std::move(ce));
  }
  d.root = j.at("root").get<int>();
  d.truncated = j.at("truncated").get<bool>();
  d.truncation_reason = j.at("truncation_reason").get<std::string>();
  d.witness = j.at("witness").get<std::vector<int>>();
  d.questions = j.at("questions").get<std::size_t>();
  return d;
}

TransitionDiagram cached_closure(const MeasureSpec& spec, const Caps& caps, const std::string& dir, bool* hit) {
  fs::create_directories(dir);
  fs::path diagram_path = fs::path(dir) / ("diagram-" + diagram_key(spec, caps) + ".json");
  fs::path memo_path = fs::path(dir) / ("oracle-" + content_hash(canonical_text(spec)) + ".json");
  if (hit) *hit = false;
  if (fs::exists(diagram_path)) {
    try {
      TransitionDiagram d = deserialize_diagram(spec, read_file(diagram_path));
      if (hit) *hit = true;
      return d;
    } catch (const std::exception&) {
      // Stale or damaged entry: recompute and overwrite.
    }
  }
  ClosureOptions opt;
  opt.caps = caps;
  if (fs::exists(memo_path)) {
    try {
      opt.seed = memo_from(spec, json::parse(read_file(memo_path)).at("memo"));
    } catch (const std::exception&) {
      opt.seed.clear();
    }
  }
  std::vector<std::pair<KOracle::Key, bool>> memo;
  opt.memo_out = &memo;
  TransitionDiagram d = closure(spec, opt);
  write_file(diagram_path, serialize_diagram(d, memo));
  json m;
  m["cache_version"] = kCacheVersion;
  m["memo"] = memo_json(memo);
  write_file(memo_path, m.dump());
  return d;
}

}  // namespace locdim
