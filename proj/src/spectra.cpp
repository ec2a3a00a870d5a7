#include "locdim/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace locdim {

std::string to_string(const RatMatrix& m) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_string(m(i, j));
    os << "]";
  }
  return os.str();
}

Norms norms(const RatMatrix& m) { return {sum_norm(m), min_col_sum(m), max_col_sum(m)}; }

IntMatrix to_scaled(const RatMatrix& m, const Integer& scale) {
  IntMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Rational v = m(i, j) * scale;
      if (denom(v) != 1) throw SpectraError("scale does not clear denominators");
      out(i, j) = numer(v);
    }
  return out;
}

RatMatrix from_scaled(const IntMatrix& m, const Integer& scale) {
  RatMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j), scale);
  return out;
}

Mat<double> to_double(const RatMatrix& m) {
  Mat<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).convert_to<double>();
  return out;
}

long double SpectralBracket::mid() const {
  return static_cast<long double>(((lo + hi) / 2).convert_to<double>());
}

double spectral_radius_estimate(const Mat<double>& m) {
  if (m.rows() == 0) return 0;
  Eigen::EigenSolver<Mat<double>> es(m, false);
  double best = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) best = std::max(best, std::abs(es.eigenvalues()(i)));
  return best;
}

namespace {

// Perron-like vector by power iteration on the shifted matrix A/|A| + I.
Eigen::VectorXd perron_vector(const Mat<double>& a) {
  const Eigen::Index n = a.rows();
  double scale = a.cwiseAbs().colwise().sum().maxCoeff();
  if (scale == 0) scale = 1;
  Mat<double> b = a / scale + Mat<double>::Identity(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXd y = b * x;
    y /= y.maxCoeff();
    double change = (y - x).cwiseAbs().maxCoeff();
    x = y;
    if (change < 1e-17) break;
  }
  return x;
}

}  // namespace

SpectralBracket spectral_radius(const RatMatrix& m, const Rational& tol, int max_squarings) {
  if (m.rows() != m.cols()) throw SpectraError("spectral radius of non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) throw SpectraError("spectral radius of empty matrix");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (m(i, j) < 0) throw SpectraError("spectral radius bracket needs a nonnegative matrix");

  SpectralBracket br;
  if (n == 1) {
    br.lo = br.hi = m(0, 0);
    br.ok = true;
    return br;
  }
  bool zero = true;
  for (Eigen::Index i = 0; i < n && zero; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (m(i, j) != 0) {
        zero = false;
        break;
      }
  if (zero) {
    br.lo = br.hi = 0;
    br.ok = true;
    return br;
  }

  // Collatz-Wielandt with a floating Perron vector, evaluated exactly.
  Eigen::VectorXd xd = perron_vector(to_double(m));
  const double xmax = xd.maxCoeff();
  std::vector<Rational> x(n);
  std::vector<int> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    double xi = std::max(xd(i), xmax * 1e-30);
    x[i] = rational_from_double(xi);
    if (xd(i) > xmax * 1e-12) support.push_back(static_cast<int>(i));
  }
  br.hi = -1;
  for (Eigen::Index i = 0; i < n; ++i) {
    Rational s = 0;
    for (Eigen::Index j = 0; j < n; ++j) s += m(i, j) * x[j];
    Rational ratio = s / x[i];
    if (br.hi < 0 || ratio > br.hi) br.hi = ratio;
  }
  bool first = true;
  for (int i : support) {
    Rational s = 0;
    for (int j : support) s += m(i, j) * x[j];
    Rational ratio = s / x[i];
    if (first || ratio < br.lo) br.lo = ratio;
    first = false;
  }
  if (br.lo < 0) br.lo = 0;
  br.iterations = 1;
  if (br.hi - br.lo <= tol) {
    br.ok = true;
    return br;
  }

  // Gelfand bracket by repeated squaring. The working matrices equal the
  // true power divided by 2^exponent, rounded outward to dyadics.
  RatMatrix lower = m, upper = m;
  long double power = 1, exponent = 0;
  for (int k = 1; k <= max_squarings; ++k) {
    lower = (lower * lower).eval();
    upper = (upper * upper).eval();
    power *= 2;
    exponent *= 2;
    Rational big = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) big = std::max(big, Rational(upper(i, j)));
    if (big == 0) {
      br.lo = br.hi = 0;
      br.ok = true;
      return br;
    }
    long shift = static_cast<long>(std::floor(log_rational(big) / std::log(2.0L)));
    Rational factor = shift >= 0 ? Rational(1, Integer(1) << shift) : Rational(Integer(1) << -shift);
    exponent += static_cast<long double>(shift);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        lower(i, j) = round_dyadic(lower(i, j) * factor, 200, false);
        upper(i, j) = round_dyadic(upper(i, j) * factor, 200, true);
      }
    Rational diag = 0;
    for (Eigen::Index i = 0; i < n; ++i) diag = std::max(diag, Rational(lower(i, i)));
    const long double log2 = std::log(2.0L);
    if (diag > 0) {
      long double r = std::exp((log_rational(diag) + exponent * log2) / power);
      Rational lo_k = rational_from_double(static_cast<double>(r * (1 - 1e-15L)));
      if (lo_k > br.lo) br.lo = lo_k;
    }
    long double r = std::exp((log_rational(max_col_sum(upper)) + exponent * log2) / power);
    Rational hi_k = rational_from_double(static_cast<double>(r * (1 + 1e-15L)));
    if (hi_k < br.hi) br.hi = hi_k;
    br.iterations = k + 1;
    if (br.hi - br.lo <= tol) {
      br.ok = true;
      return br;
    }
  }
  br.ok = false;
  return br;
}

RatPoly char_poly(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw SpectraError("characteristic polynomial of non-square matrix");
  const Eigen::Index n = a.rows();
  // Faddeev-LeVerrier recursion.
  RatPoly c(static_cast<std::size_t>(n) + 1, 0);
  c[n] = 1;
  RatMatrix M = RatMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = (a * M).eval();
    for (Eigen::Index i = 0; i < n; ++i) M(i, i) += c[n - k + 1];
    RatMatrix AM = (a * M).eval();
    Rational tr = 0;
    for (Eigen::Index i = 0; i < n; ++i) tr += AM(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

RatMatrix matrix_power(const RatMatrix& m, int k) {
  if (m.rows() != m.cols()) throw SpectraError("power of non-square matrix");
  RatMatrix result = RatMatrix::Identity(m.rows(), m.cols());
  RatMatrix base = m;
  while (k > 0) {
    if (k & 1) result = (result * base).eval();
    k >>= 1;
    if (k) base = (base * base).eval();
  }
  return result;
}

bool root_le(const Rational& a, int ra, const Rational& b, int rb) {
  return rational_pow(a, static_cast<unsigned>(rb)) <= rational_pow(b, static_cast<unsigned>(ra));
}

SpectralOrder compare_spectral(const RatMatrix& a, int steps_a, const RatMatrix& b, int steps_b) {
  RatMatrix pa = matrix_power(a, steps_b), pb = matrix_power(b, steps_a);
  // A common power-of-two rescaling keeps the absolute tolerance meaningful.
  Rational big = 0;
  for (Eigen::Index i = 0; i < pa.rows(); ++i)
    for (Eigen::Index j = 0; j < pa.cols(); ++j) big = std::max(big, Rational(pa(i, j)));
  for (Eigen::Index i = 0; i < pb.rows(); ++i)
    for (Eigen::Index j = 0; j < pb.cols(); ++j) big = std::max(big, Rational(pb(i, j)));
  if (big > 0) {
    long shift = static_cast<long>(std::floor(log_rational(big) / std::log(2.0L)));
    Rational factor = shift >= 0 ? Rational(1, Integer(1) << shift) : Rational(Integer(1) << -shift);
    pa *= factor;
    pb *= factor;
  }
  Rational tol(1, Integer(1) << 60);
  SpectralBracket ba = spectral_radius(pa, tol), bb = spectral_radius(pb, tol);
  if (ba.hi < bb.lo) return SpectralOrder::less;
  if (ba.lo > bb.hi) return SpectralOrder::greater;
  RatPoly p = char_poly(pa), q = char_poly(pb);
  Rational lo = std::min(ba.lo, bb.lo), hi = std::max(ba.hi, bb.hi);
  Rational below = lo - tol;
  if (sturm_count(p, below, hi) == 1 && sturm_count(q, below, hi) == 1) {
    RatPoly g = poly_gcd(p, q);
    if (g.size() > 1 && sturm_count(g, below, hi) == 1) return SpectralOrder::equal;
  }
  return SpectralOrder::undecided;
}

}  // namespace locdim
