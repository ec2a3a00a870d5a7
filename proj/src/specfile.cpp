#include "locdim/model.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace locdim {

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error(msg),
      line(l),
      column(c) {}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip();
    return pos >= s.size();
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
};

// Offset of the failure inside the parsed text, carried out via the exception.
struct ElementSyntax : std::invalid_argument {
  ElementSyntax(const std::string& m, std::size_t p) : std::invalid_argument(m), pos(p) {}
  std::size_t pos;
};

Rational read_number(Cursor& c) {
  c.skip();
  std::size_t start = c.pos;
  while (c.pos < c.s.size() && (std::isdigit(static_cast<unsigned char>(c.s[c.pos])) || c.s[c.pos] == '.')) ++c.pos;
  std::string num = c.s.substr(start, c.pos - start);
  c.skip();
  if (c.pos < c.s.size() && c.s[c.pos] == '/') {
    ++c.pos;
    c.skip();
    std::size_t ds = c.pos;
    while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
    if (ds == c.pos) throw ElementSyntax("expected denominator", ds);
    num += "/" + c.s.substr(ds, c.pos - ds);
  }
  try {
    return parse_rational(num);
  } catch (const std::exception& e) {
    throw ElementSyntax(e.what(), start);
  }
}

}  // namespace

Element parse_element(const FieldPtr& f, const std::string& text) {
  Cursor c{text};
  Element acc = f->zero();
  const Element r = f->gen();
  bool first = true;
  if (c.done()) throw ElementSyntax("empty expression", 0);
  while (!c.done()) {
    int sign = 1;
    char ch = c.peek();
    if (ch == '+' || ch == '-') {
      sign = ch == '-' ? -1 : 1;
      ++c.pos;
    } else if (!first) {
      throw ElementSyntax("expected '+' or '-'", c.pos);
    }
    first = false;
    Rational coef = 1;
    bool have_coef = false;
    ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      coef = read_number(c);
      have_coef = true;
      if (c.peek() == '*') {
        ++c.pos;
        if (c.peek() != 'r') throw ElementSyntax("expected 'r' after '*'", c.pos);
      }
    }
    unsigned power = 0;
    if (c.peek() == 'r') {
      ++c.pos;
      power = 1;
      if (c.peek() == '^') {
        ++c.pos;
        c.skip();
        std::size_t ps = c.pos;
        while (c.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[c.pos]))) ++c.pos;
        if (ps == c.pos) throw ElementSyntax("expected exponent", ps);
        power = static_cast<unsigned>(std::stoul(text.substr(ps, c.pos - ps)));
      }
    } else if (!have_coef) {
      throw ElementSyntax("expected number or 'r'", c.pos);
    }
    Element term = f->from(coef * sign);
    for (unsigned i = 0; i < power; ++i) term *= r;
    acc += term;
  }
  return acc;
}

namespace {

std::vector<std::pair<std::string, int>> split_list(const std::string& v, int col0) {
  // Commas separate entries; a list without commas splits on whitespace.
  std::vector<std::pair<std::string, int>> out;
  char sep = v.find(',') != std::string::npos ? ',' : ' ';
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t end = v.find(sep, start);
    if (end == std::string::npos) end = v.size();
    std::string item = v.substr(start, end - start);
    std::size_t a = item.find_first_not_of(" \t");
    if (a != std::string::npos) {
      std::size_t b = item.find_last_not_of(" \t");
      out.emplace_back(item.substr(a, b - a + 1), col0 + static_cast<int>(start + a));
    } else if (sep == ',') {
      throw ParseError("empty list entry", 0, col0 + static_cast<int>(start));
    }
    start = end + 1;
  }
  return out;
}

struct Entry {
  std::string value;
  int line, column;
};

}  // namespace

RawSpec parse_spec_text(const std::string& text) {
  static const std::set<std::string> known = {"field.min_poly", "field.root_interval", "ifs.digits", "ifs.probs",
                                              "ifs.mode"};
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw_line, section;
  int lineno = 0;
  while (std::getline(in, raw_line)) {
    ++lineno;
    std::string line = raw_line.substr(0, raw_line.find('#'));
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    std::string body = line.substr(a, b - a + 1);
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated section header", lineno, static_cast<int>(a) + 1);
      section = body.substr(1, body.size() - 2);
      if (section != "field" && section != "ifs")
        throw ParseError("unknown section '" + section + "'", lineno, static_cast<int>(a) + 1);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, static_cast<int>(a) + 1);
    std::string key = line.substr(a, eq - a);
    key = key.substr(0, key.find_last_not_of(" \t") + 1);
    std::string full = section.empty() ? key : section + "." + key;
    if (!known.count(full)) throw ParseError("unknown key '" + full + "'", lineno, static_cast<int>(a) + 1);
    if (entries.count(full)) throw ParseError("duplicate key '" + full + "'", lineno, static_cast<int>(a) + 1);
    std::size_t v0 = line.find_first_not_of(" \t", eq + 1);
    std::string value = v0 == std::string::npos ? "" : line.substr(v0);
    value = value.substr(0, value.find_last_not_of(" \t\r") + 1);
    entries[full] = {value, lineno, v0 == std::string::npos ? static_cast<int>(eq) + 2 : static_cast<int>(v0) + 1};
  }
  for (const char* req : {"field.min_poly", "field.root_interval", "ifs.digits"})
    if (!entries.count(req)) throw ParseError(std::string("missing key '") + req + "'", lineno, 1);

  auto fail = [](const Entry& e, const std::string& msg, int col) -> ParseError { return ParseError(msg, e.line, col); };

  RawSpec raw;
  const Entry& mp = entries["field.min_poly"];
  std::vector<Integer> poly;
  for (auto& [tok, col] : split_list(mp.value, mp.column)) {
    try {
      Rational q = parse_rational(tok);
      if (denom(q) != 1) throw std::invalid_argument("not an integer");
      poly.push_back(numer(q));
    } catch (const std::exception& e) {
      throw fail(mp, "bad coefficient '" + tok + "': " + e.what(), col);
    }
  }
  const Entry& ri = entries["field.root_interval"];
  auto bounds = split_list(ri.value, ri.column);
  if (bounds.size() != 2) throw fail(ri, "root_interval needs two rationals", ri.column);
  Rational lo, hi;
  try {
    lo = parse_rational(bounds[0].first);
    hi = parse_rational(bounds[1].first);
  } catch (const std::exception& e) {
    throw fail(ri, e.what(), ri.column);
  }
  try {
    raw.field = Field::create(poly, lo, hi);
  } catch (const FieldError& e) {
    throw fail(mp, e.what(), mp.column);
  }

  const Entry& dg = entries["ifs.digits"];
  for (auto& [tok, col] : split_list(dg.value, dg.column)) {
    try {
      raw.digits.push_back(parse_element(raw.field, tok));
    } catch (const ElementSyntax& e) {
      throw fail(dg, std::string(e.what()) + " in '" + tok + "'", col + static_cast<int>(e.pos));
    }
  }
  if (entries.count("ifs.probs")) {
    const Entry& pr = entries["ifs.probs"];
    for (auto& [tok, col] : split_list(pr.value, pr.column)) {
      try {
        raw.probs.push_back(parse_rational(tok));
      } catch (const std::exception& e) {
        throw fail(pr, "bad probability '" + tok + "': " + e.what(), col);
      }
    }
  }
  if (entries.count("ifs.mode")) {
    const Entry& md = entries["ifs.mode"];
    try {
      raw.mode = parse_mode(md.value);
    } catch (const SpecError& e) {
      throw fail(md, e.what(), md.column);
    }
  }
  return raw;
}

RawSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

}  // namespace locdim
