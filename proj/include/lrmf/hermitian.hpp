#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "lrmf/errors.hpp"

namespace lrmf {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// A square complex matrix with exact conjugate symmetry and real diagonal,
/// both enforced at construction.
class Hermitian {
 public:
  Hermitian() = default;

  /// Symmetrizes m as (m + m^H)/2. Throws if m is not square or the
  /// asymmetric part is large relative to the matrix scale.
  explicit Hermitian(const CMatrix& m);

  static Hermitian Zero(Eigen::Index dim);
  static Hermitian Identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& mat() const { return m_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const {
    return m_(row, col);
  }

  /// Max deviation from conjugate symmetry; zero for every value produced by
  /// this library.
  double symmetry_defect() const;

 private:
  struct Trusted {};
  Hermitian(CMatrix m, Trusted) : m_(std::move(m)) {}
  CMatrix m_;

  friend Hermitian hermitian_unchecked(CMatrix m);
};

/// Wraps a matrix already known to be exactly Hermitian (internal fast path).
Hermitian hermitian_unchecked(CMatrix m);

struct MatrixNorms {
  double frobenius = 0.0;
  double op = 0.0;
  double nuclear = 0.0;
};

/// tr(AB); real because both arguments are Hermitian.
double frobenius_inner(const Hermitian& a, const Hermitian& b);

/// Frobenius, operator (largest singular value) and nuclear norm, all derived
/// from one eigendecomposition.
MatrixNorms norms(const Hermitian& a);

/// Real eigenvalues in increasing order.
Eigen::VectorXd hermitian_eigenvalues(const Hermitian& a);

/// Count of eigenvalues above 1e-12 * ||A|| in magnitude.
int numerical_rank(const Hermitian& a);

/// Unique minimizer of threshold*||X||_1 + (1/2)*||X - A||_F^2. For Hermitian
/// input this shrinks each eigenvalue toward zero by `threshold`, preserving
/// sign and clamping at zero.
Hermitian svd_soft_threshold(const Hermitian& a, double threshold);

/// An element of the Hermitian space of dimension blocks*dim, with the blocks
/// on the diagonal.
class BlockDiag {
 public:
  BlockDiag() = default;
  explicit BlockDiag(std::vector<Hermitian> blocks);

  std::size_t block_count() const { return blocks_.size(); }
  Eigen::Index block_dim() const;
  const Hermitian& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<Hermitian>& blocks() const { return blocks_; }

 private:
  std::vector<Hermitian> blocks_;
};

/// Applies svd_soft_threshold to each block; the nuclear norm of a block
/// diagonal matrix is the sum of the blocks' nuclear norms.
BlockDiag block_soft_threshold(const BlockDiag& s, double threshold);

MatrixNorms norms(const BlockDiag& s);

// --- text format: header line `m`, then `row col re im` entries (1-based,
// upper triangle sufficient) ---
void save_matrix(std::ostream& out, const Hermitian& a);
void save_matrix(const std::string& path, const Hermitian& a);
Hermitian load_matrix(std::istream& in);
Hermitian load_matrix(const std::string& path);

}  // namespace lrmf
