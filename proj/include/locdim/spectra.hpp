#pragma once

#include "locdim/numberfield.hpp"
#include "locdim/rational.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace locdim {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Nonnegative exact transition matrix, rows indexed by parent neighbours.
using RatMatrix = Mat<Rational>;
/// Transition matrix multiplied by an integer scale (lcm of probability denominators).
using IntMatrix = Mat<Integer>;

struct SpectraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string to_string(const RatMatrix& m);

template <class Scalar>
Mat<Scalar> path_product(const std::vector<Mat<Scalar>>& ms) {
  if (ms.empty()) throw SpectraError("empty path product");
  Mat<Scalar> acc = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (acc.cols() != ms[i].rows())
      throw SpectraError("dimension mismatch in path product: " + std::to_string(acc.cols()) + " vs " +
                         std::to_string(ms[i].rows()));
    acc = (acc * ms[i]).eval();
  }
  return acc;
}

template <class Derived>
typename Derived::Scalar sum_norm(const Eigen::MatrixBase<Derived>& m) {
  typename Derived::Scalar s = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) s += m(i, j);
  return s;
}

template <class Derived>
typename Derived::Scalar column_sum(const Eigen::MatrixBase<Derived>& m, Eigen::Index j) {
  typename Derived::Scalar s = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += m(i, j);
  return s;
}

template <class Derived>
typename Derived::Scalar row_sum(const Eigen::MatrixBase<Derived>& m, Eigen::Index i) {
  typename Derived::Scalar s = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j);
  return s;
}

/// Minimum column sum; supermultiplicative for nonnegative matrices.
template <class Derived>
typename Derived::Scalar min_col_sum(const Eigen::MatrixBase<Derived>& m) {
  if (m.cols() == 0) throw SpectraError("min_col_sum of empty matrix");
  auto best = column_sum(m, 0);
  for (Eigen::Index j = 1; j < m.cols(); ++j) best = std::min(best, column_sum(m, j));
  return best;
}

/// Maximum column sum, the induced 1-norm; submultiplicative.
template <class Derived>
typename Derived::Scalar max_col_sum(const Eigen::MatrixBase<Derived>& m) {
  if (m.cols() == 0) throw SpectraError("max_col_sum of empty matrix");
  auto best = column_sum(m, 0);
  for (Eigen::Index j = 1; j < m.cols(); ++j) best = std::max(best, column_sum(m, j));
  return best;
}

template <class Derived>
typename Derived::Scalar min_row_sum(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0) throw SpectraError("min_row_sum of empty matrix");
  auto best = row_sum(m, 0);
  for (Eigen::Index i = 1; i < m.rows(); ++i) best = std::min(best, row_sum(m, i));
  return best;
}

/// Minimum column sum of the principal submatrix on positions J.
template <class Derived>
typename Derived::Scalar min_col_sum_on(const Eigen::MatrixBase<Derived>& m, const std::vector<int>& J) {
  if (J.empty()) throw SpectraError("empty position subset");
  typename Derived::Scalar best{};
  bool first = true;
  for (int j : J) {
    typename Derived::Scalar s = 0;
    for (int i : J) s += m(i, j);
    if (first || s < best) best = s;
    first = false;
  }
  return best;
}

template <class Derived>
typename Derived::Scalar min_row_sum_on(const Eigen::MatrixBase<Derived>& m, const std::vector<int>& J) {
  if (J.empty()) throw SpectraError("empty position subset");
  typename Derived::Scalar best{};
  bool first = true;
  for (int i : J) {
    typename Derived::Scalar s = 0;
    for (int j : J) s += m(i, j);
    if (first || s < best) best = s;
    first = false;
  }
  return best;
}

struct Norms {
  Rational sum_norm, min_col_sum, max_col_sum;
};
Norms norms(const RatMatrix& m);

template <class Derived>
bool has_zero_column(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (column_sum(m, j) == 0) return true;
  return false;
}

template <class Derived>
bool has_zero_row(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (row_sum(m, i) == 0) return true;
  return false;
}

template <class Derived>
bool all_positive(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!(m(i, j) > 0)) return false;
  return true;
}

/// Entries times `scale`; throws if a product is not integral.
IntMatrix to_scaled(const RatMatrix& m, const Integer& scale);
RatMatrix from_scaled(const IntMatrix& m, const Integer& scale);
Mat<double> to_double(const RatMatrix& m);

struct SpectralBracket {
  Rational lo, hi;
  int iterations = 0;
  bool ok = false;
  Rational width() const { return hi - lo; }
  long double mid() const;
};

/// Rigorous bracket for the spectral radius of a square nonnegative matrix.
SpectralBracket spectral_radius(const RatMatrix& m, const Rational& tol = Rational(1, Integer(1) << 40),
                                int max_squarings = 40);

/// Floating estimate of the spectral radius, for ranking candidates only.
double spectral_radius_estimate(const Mat<double>& m);

/// Characteristic polynomial det(xI - m), ascending coefficients.
RatPoly char_poly(const RatMatrix& m);

RatMatrix matrix_power(const RatMatrix& m, int k);

enum class SpectralOrder { less, equal, greater, undecided };

/// Orders sp(a)^(1/steps_a) against sp(b)^(1/steps_b). Equality is certified
/// by a common root of the characteristic polynomials isolated in both brackets.
SpectralOrder compare_spectral(const RatMatrix& a, int steps_a, const RatMatrix& b, int steps_b);

/// a^(1/ra) <= b^(1/rb) for nonnegative rationals, exactly.
bool root_le(const Rational& a, int ra, const Rational& b, int rb);

}  // namespace locdim
