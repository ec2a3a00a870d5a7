#pragma once

#include "locdim/model.hpp"
#include "locdim/spectra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace locdim {

struct CantorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Probabilities indexed by digit 0..k, zero off the digit set.
std::vector<Rational> digit_weights(int k, const std::vector<int>& lambda, const std::vector<Rational>& probs);

/// k x k transition matrix of the ell-th child of the single torus net interval,
/// for rho = 1/d and digits j(d-1)/d, j in lambda. `weights` from digit_weights.
RatMatrix cantor_T(int d, int k, const std::vector<Rational>& weights, int ell);

/// Closed-form sufficient condition for the single-vector structure: lambda = {0..k}, k >= d-1.
bool cantor_premise_holds(int d, int k, const std::vector<int>& lambda);

/// Residue classes mod d-1 of the positions 1..k, gathered into d-1 blocks.
struct BlockLayout {
  int d = 0, k = 0;
  std::vector<int> sizes;    // block i has floor((k-1-i)/(d-1)) + 1 positions (0-based i)
  std::vector<int> offsets;  // start of each block in permuted order
  std::vector<int> order;    // permuted index -> original index (0-based)
  int blocks() const { return static_cast<int>(sizes.size()); }
};
BlockLayout block_layout(int d, int k);

struct BlockMatrix {
  BlockLayout layout;
  RatMatrix m;  // rows and columns in permuted order

  RatMatrix block(int i, int j) const;
  bool block_nonzero(int i, int j) const;
  /// r with block (i, j) nonzero only when j - i = r mod (d-1); nullopt when mixed or zero.
  std::optional<int> type() const;
  /// Every nonzero block is entrywise positive.
  bool block_positive() const;
  bool block_diagonal() const;
};

BlockMatrix block_permute(const RatMatrix& t, const BlockLayout& layout);
RatMatrix block_unpermute(const BlockMatrix& b);
BlockMatrix block_product(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix block_power(const BlockMatrix& a, int n);

struct ThetaResult {
  int depth = 0;
  Rational block_product;  // min over words of the product of nonzero-block min column sums
  std::vector<int> word;   // minimizing word of child indices
  long double theta = 0;   // block_product^(1 / ((d-1) depth))
  long double bound = 0;   // log theta / log(1/d)
  bool usable = false;     // false when a nonzero block has a zero column
};

/// Geometric-mean bound on the torus local dimensions over words of length `depth`.
ThetaResult upper_bound_theta(int d, int k, const std::vector<Rational>& weights, int depth);

struct BhmResult {
  int d = 0, k = 0;  // k = m - d
  Rational a, disc;  // beta = (a + sqrt(disc)) / 2
  long double beta = 0;
  long double value = 0;  // log beta / log(1/d)
  std::vector<std::string> flags;
};

/// Sup of the line local dimensions away from the endpoints for the binomial
/// (d+k)-fold convolution. k = -1 and k > d-2 are computed but flagged.
BhmResult bhm_sup_dim(int d, int k);

/// theta > beta exactly, with theta^((d-1) depth) = theta.block_product.
bool theta_exceeds_beta(const ThetaResult& theta, const BhmResult& beta, int d);

struct ShrinkRow {
  int m = 0, d = 0;
  long double line = 0;   // lower bound for the line sup
  long double torus = 0;  // upper bound for the torus sup
  bool holds = false;     // torus < line, decided exactly
  int depth = 0;
  std::vector<std::string> flags;
};

ShrinkRow shrink_row(int m, int d, int depth_cap = 4);
std::vector<ShrinkRow> shrink_table(const std::vector<std::pair<int, int>>& pairs, int depth_cap = 4);

/// Every (m, d) with 3 <= d <= max_d and d - 1 <= m <= max_m.
std::vector<std::pair<int, int>> default_table_pairs(int max_m = 10, int max_d = 10);

}  // namespace locdim
