#include "locdim/numberfield.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>

namespace locdim {

namespace mp = boost::multiprecision;

namespace {

template <unsigned Bits>
using Float = mp::number<mp::cpp_bin_float<Bits, mp::digit_base_2>, mp::et_off>;

template <class F>
struct Cx {
  F re, im;
  Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
  Cx operator-(const Cx& o) const { return {re - o.re, im - o.im}; }
  Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Cx operator/(const Cx& o) const {
    F d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  F abs() const { return mp::sqrt(re * re + im * im); }
};

template <unsigned Bits>
RootEnclosure enclose_impl(const std::vector<Integer>& poly) {
  using F = Float<Bits>;
  using C = Cx<F>;
  const std::size_t n = poly.size() - 1;
  std::vector<F> a;
  for (const auto& c : poly) a.push_back(F(c.str()));
  const F lead = a.back();

  auto eval = [&](const C& z, C& p, C& dp) {
    p = {a[n], F(0)};
    dp = {F(0), F(0)};
    for (std::size_t i = n; i-- > 0;) {
      dp = dp * z + p;
      p = p * z + C{a[i], F(0)};
    }
  };

  F radius = 0;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, F(mp::abs(a[i] / lead)));
  radius = (radius + 1) / 2 + F(0.25);
  std::vector<C> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    double t = 2 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = {radius * F(std::cos(t)), radius * F(std::sin(t))};
  }
  const F tol = mp::ldexp(F(1), -static_cast<int>(Bits) + 12);
  for (int iter = 0; iter < 4000; ++iter) {
    F worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      C p, dp;
      eval(z[i], p, dp);
      if (p.re == 0 && p.im == 0) continue;
      C w = p / dp;
      C s{F(0), F(0)};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s = s + C{F(1), F(0)} / (z[i] - z[j]);
      C corr = w / (C{F(1), F(0)} - w * s);
      z[i] = z[i] - corr;
      worst = std::max(worst, F(corr.abs() / (z[i].abs() + 1)));
    }
    if (worst < tol) break;
  }

  RootEnclosure out;
  out.bits = Bits;
  const F pad_rel = mp::ldexp(F(1), -static_cast<int>(Bits) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    C p, dp;
    eval(z[i], p, dp);
    F denom = mp::abs(lead);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) denom *= (z[i] - z[j]).abs();
    F r = denom == 0 ? F(1e300) : F(static_cast<double>(n)) * p.abs() / denom;
    r = r * (1 + pad_rel) + mp::ldexp(F(1), -static_cast<int>(Bits) + 24) * (z[i].abs() + 1);
    RootDisk d;
    d.center = {z[i].re.template convert_to<double>(), z[i].im.template convert_to<double>()};
    // Widen by the rounding of the centre to double.
    double centre_err = 4 * std::numeric_limits<double>::epsilon() * (std::abs(d.center) + 1);
    d.radius = r.template convert_to<double>() * (1 + 1e-12) + centre_err;
    out.disks.push_back(d);
  }
  out.separated = true;
  for (std::size_t i = 0; i < n && out.separated; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(out.disks[i].center - out.disks[j].center) <= out.disks[i].radius + out.disks[j].radius) {
        out.separated = false;
        break;
      }
  return out;
}

std::vector<Integer> trimmed(std::vector<Integer> p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

}  // namespace

RootEnclosure enclose_roots(const std::vector<Integer>& poly_in, unsigned bits) {
  auto poly = trimmed(poly_in);
  if (poly.size() < 2) throw FieldError("root enclosure needs degree >= 1");
  if (bits <= 64) return enclose_impl<64>(poly);
  if (bits <= 128) return enclose_impl<128>(poly);
  if (bits <= 256) return enclose_impl<256>(poly);
  return enclose_impl<512>(poly);
}

std::string to_string(PisotStatus s) {
  switch (s) {
    case PisotStatus::pisot: return "pisot";
    case PisotStatus::not_pisot: return "not-pisot";
    case PisotStatus::undecided: return "undecided";
  }
  return "?";
}

PisotCertificate nf_is_pisot(const std::vector<Integer>& poly_in, const PisotOptions& opt) {
  PisotCertificate cert;
  auto poly = trimmed(poly_in);
  if (poly.size() < 2) throw FieldError("Pisot test needs degree >= 1");
  if (poly.back() < 0)
    for (auto& c : poly) c = -c;
  if (poly.back() != 1) {
    cert.status = PisotStatus::not_pisot;
    cert.reason = "not monic: root is not an algebraic integer";
    return cert;
  }
  if (poly.size() == 2) {
    double r = static_cast<double>(Integer(-poly[0]).convert_to<long long>());
    cert.roots = {RootDisk{{r, 0.0}, 0.0}};
    cert.bits = 0;
    cert.status = (-poly[0] > 1) ? PisotStatus::pisot : PisotStatus::not_pisot;
    cert.reason = cert.status == PisotStatus::pisot ? "integer greater than one" : "integer not greater than one";
    return cert;
  }
  for (unsigned bits = 64; bits <= opt.max_bits; bits *= 2) {
    RootEnclosure enc = enclose_roots(poly, bits);
    cert.roots = enc.disks;
    cert.bits = bits;
    if (!enc.separated) continue;
    int outside = 0, inside = 0, at_least_one = 0, dominant_real_pos = 0;
    for (const auto& d : enc.disks) {
      double m = std::abs(d.center);
      if (m - d.radius > 1) {
        ++outside;
        if (d.center.real() - d.radius > 1) ++dominant_real_pos;
      }
      if (m - d.radius >= 1) ++at_least_one;
      if (m + d.radius < 1 - opt.margin) ++inside;
    }
    const int n = static_cast<int>(enc.disks.size());
    if (at_least_one >= 2) {
      cert.status = PisotStatus::not_pisot;
      cert.reason = "at least two roots of modulus >= 1";
      return cert;
    }
    if (outside == 1 && inside == n - 1) {
      if (dominant_real_pos == 1) {
        cert.status = PisotStatus::pisot;
        cert.reason = "one real root > 1, conjugates inside 1 - margin";
      } else {
        cert.status = PisotStatus::not_pisot;
        cert.reason = "dominant root is not a positive real";
      }
      return cert;
    }
    if (inside == n) {
      cert.status = PisotStatus::not_pisot;
      cert.reason = "no root of modulus > 1";
      return cert;
    }
  }
  cert.status = PisotStatus::undecided;
  cert.reason = "root too close to the unit circle at maximum precision";
  return cert;
}

Rational nf_separation_bound(const std::vector<Element>& S, const PisotOptions& opt) {
  if (S.empty()) return 1;
  const FieldPtr& f = S.front().field();
  std::vector<Element> diffs;
  for (const auto& a : S)
    for (const auto& b : S) {
      Element d = a - b;
      if (!d.is_zero()) diffs.push_back(d);
    }
  if (diffs.empty()) return 1;

  auto beta_poly = inverse_poly(*f);
  auto cert = nf_is_pisot(beta_poly, opt);
  if (cert.status != PisotStatus::pisot) throw FieldError("separation bound requires 1/rho Pisot (" + cert.reason + ")");

  const std::size_t n = f->degree();
  // Coordinates in the basis 1, beta, ..., beta^(n-1): solve B y = x where
  // column j of B is beta^j written in powers of rho.
  Element beta = f->gen().inverse();
  std::vector<std::vector<Rational>> B(n, std::vector<Rational>(n));
  Element pw = f->one();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) B[i][j] = pw.coeffs()[i];
    pw *= beta;
  }
  auto solve = [&](const std::vector<Rational>& x) {
    auto M = B;
    auto y = x;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (M[piv][col] == 0) ++piv;
      std::swap(M[piv], M[col]);
      std::swap(y[piv], y[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || M[r][col] == 0) continue;
        Rational k = M[r][col] / M[col][col];
        for (std::size_t c = col; c < n; ++c) M[r][c] -= k * M[col][c];
        y[r] -= k * y[col];
      }
    }
    for (std::size_t i = 0; i < n; ++i) y[i] /= M[i][i];
    return y;
  };
  std::vector<std::vector<Rational>> coords;
  Integer D = 1;
  for (const auto& d : diffs) {
    coords.push_back(solve(d.coeffs()));
    D = boost::multiprecision::lcm(D, lcm_of_denominators(coords.back()));
  }
  if (n == 1) return Rational(1, D);

  // Identity embedding: the real conjugate nearest 1/rho.
  double beta_approx = static_cast<double>(1.0L / f->approx());
  std::size_t id = 0;
  for (std::size_t i = 1; i < cert.roots.size(); ++i)
    if (std::abs(cert.roots[i].center - beta_approx) < std::abs(cert.roots[id].center - beta_approx)) id = i;

  const double Dd = D.convert_to<double>();
  double bound = 1.0 / Dd;
  for (std::size_t k = 0; k < cert.roots.size(); ++k) {
    if (k == id) continue;
    const auto& disk = cert.roots[k];
    double cs = 0;
    for (const auto& y : coords) {
      std::complex<double> v = 0, p = 1;
      double err = 0;
      for (std::size_t j = 0; j < n; ++j) {
        double yj = y[j].convert_to<double>();
        v += yj * p;
        err += std::abs(yj) * (std::pow(std::abs(disk.center) + disk.radius, static_cast<double>(j)) -
                               std::pow(std::abs(disk.center), static_cast<double>(j)));
        p *= disk.center;
      }
      cs = std::max(cs, std::abs(v) + err);
    }
    double mod = std::abs(disk.center) + disk.radius;
    if (mod >= 1) throw FieldError("conjugate modulus not certified below one");
    bound *= (1 - mod) / (Dd * cs * (1 + 1e-9));
  }
  return rational_from_double(bound * (1 - 1e-9));
}

}  // namespace locdim
