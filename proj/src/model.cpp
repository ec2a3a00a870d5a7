#include "locdim/model.hpp"

#include <algorithm>
#include <sstream>

namespace locdim {

std::string to_string(Mode m) { return m == Mode::line ? "line" : "torus"; }

Mode parse_mode(const std::string& s) {
  if (s == "line") return Mode::line;
  if (s == "torus") return Mode::torus;
  throw SpecError("mode must be 'line' or 'torus', got '" + s + "'");
}

Integer MeasureSpec::prob_scale() const { return lcm_of_denominators(probs); }

Validated spec_validate(const RawSpec& raw) {
  if (!raw.field) throw SpecError("spec has no field");
  if (raw.digits.empty()) throw SpecError("spec has no digits");
  if (!raw.probs.empty() && raw.probs.size() != raw.digits.size())
    throw SpecError("probs and digits differ in length");

  std::vector<std::size_t> order(raw.digits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw.digits[a] < raw.digits[b]; });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (raw.digits[order[i]] == raw.digits[order[i + 1]]) throw SpecError("duplicate digit " + raw.digits[order[i]].str());
    if (order[i] > order[i + 1]) throw SpecError("digits must be listed in increasing order");
  }

  Validated v;
  MeasureSpec& s = v.spec;
  s.field = raw.field;
  s.rho = raw.field->gen();
  s.mode = raw.mode;
  const Element shift = raw.digits.front();
  for (const auto& d : raw.digits) s.digits.push_back(d - shift);

  if (!raw.probs.empty()) {
    Rational total = 0;
    for (const auto& p : raw.probs) {
      if (p <= 0) throw SpecError("probabilities must be positive");
      total += p;
    }
    if (total != 1) throw SpecError("probabilities sum to " + to_string(total) + ", not 1");
    s.probs = raw.probs;
  }

  const Element one = s.field->one();
  s.delta = s.digits.back() / (one - s.rho);
  if (s.mode == Mode::torus) {
    auto n = s.delta.integer_value();
    if (!n || *n <= 0)
      throw SpecError("torus mode needs an integer diameter, got delta = " + s.delta.str() +
                      "; rescale the digits so that delta is a positive integer");
  }

  SpecReport& r = v.report;
  r.delta = s.delta;
  if (s.has_probs()) {
    Rational lo = *std::min_element(s.probs.begin(), s.probs.end());
    r.is_regular = s.probs.front() == lo && s.probs.back() == lo;
  }
  const Element hull = s.rho * s.delta;
  r.full_support_hull = true;
  r.strong_separation = s.digits.size() > 1;
  for (std::size_t j = 0; j + 1 < s.digits.size(); ++j) {
    const Element end = s.digits[j] + hull;
    if (s.digits[j + 1] > end) r.full_support_hull = false;
    if (!(s.digits[j + 1] > end)) r.strong_separation = false;
  }
  r.pisot = nf_is_pisot(inverse_poly(*s.field));
  return v;
}

std::vector<Rational> binomial_probs(int m) {
  std::vector<Rational> p;
  Integer c = 1, total = Integer(1) << m;
  for (int j = 0; j <= m; ++j) {
    p.emplace_back(c, total);
    c = c * (m - j) / (j + 1);
  }
  return p;
}

MeasureSpec spec_convolve(const MeasureSpec& base, int m) {
  if (m < 1) throw SpecError("convolution power must be positive");
  const Element one = base.field->one();
  const Element step = one - base.rho;
  bool conforming = base.digits.size() == 2 && base.digits[0].is_zero() && base.digits[1] == step &&
                    base.probs.size() == 2 && base.probs[0] == Rational(1, 2) && base.probs[1] == Rational(1, 2);
  if (!conforming) throw SpecError("convolution base must be digits {0, 1 - rho} with probs (1/2, 1/2)");
  if (m == 1) return base;
  RawSpec raw;
  raw.field = base.field;
  raw.mode = base.mode;
  for (int j = 0; j <= m; ++j) raw.digits.push_back(step * Rational(j));
  raw.probs = binomial_probs(m);
  return spec_validate(raw).spec;
}

MeasureSpec spec_cantor(int d, int k, const std::vector<int>& lambda, const std::vector<Rational>& probs, Mode mode) {
  if (d < 3) throw SpecError("Cantor-like spec needs d >= 3");
  if (std::find(lambda.begin(), lambda.end(), 0) == lambda.end() ||
      std::find(lambda.begin(), lambda.end(), k) == lambda.end())
    throw SpecError("lambda must contain 0 and k");
  if (!probs.empty() && probs.size() != lambda.size()) throw SpecError("need one probability per element of lambda");
  RawSpec raw;
  raw.field = Field::rational(Rational(1, d));
  raw.mode = mode;
  for (int j : lambda) {
    if (j < 0 || j > k) throw SpecError("lambda entries must lie in 0..k");
    raw.digits.push_back(raw.field->from(Rational(j * (d - 1), d)));
  }
  raw.probs = probs;
  return spec_validate(raw).spec;
}

std::string canonical_text(const MeasureSpec& s) {
  std::ostringstream os;
  os << "min_poly";
  for (const auto& c : s.field->integer_poly()) os << ' ' << c;
  // The isolating interval moves under refinement; a rounded value pins the root.
  os.precision(17);
  os << "\nroot ~ " << static_cast<double>(s.field->approx()) << "\ndigits";
  for (const auto& d : s.digits) os << " [" << d.str() << "]";
  os << "\nprobs";
  for (const auto& p : s.probs) os << ' ' << to_string(p);
  os << "\nmode " << to_string(s.mode) << "\n";
  return os.str();
}

}  // namespace locdim
