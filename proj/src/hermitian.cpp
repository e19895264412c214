#include "lrmf/hermitian.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace lrmf {

namespace {

CMatrix symmetrized(const CMatrix& m) {
  CMatrix out = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = Complex(out(i, i).real(), 0.0);
  return out;
}

}  // namespace

Hermitian::Hermitian(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("Hermitian requires a square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const double scale = m.norm();
  const double defect = (m - m.adjoint()).norm();
  if (defect > 1e-8 * std::max(1.0, scale))
    throw InvalidArgument("matrix is not Hermitian (asymmetry " + std::to_string(defect) + ")");
  m_ = symmetrized(m);
}

Hermitian hermitian_unchecked(CMatrix m) {
  return Hermitian(std::move(m), Hermitian::Trusted{});
}

Hermitian Hermitian::Zero(Eigen::Index dim) {
  return hermitian_unchecked(CMatrix::Zero(dim, dim));
}

Hermitian Hermitian::Identity(Eigen::Index dim) {
  return hermitian_unchecked(CMatrix::Identity(dim, dim));
}

double Hermitian::symmetry_defect() const {
  if (m_.size() == 0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double frobenius_inner(const Hermitian& a, const Hermitian& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("frobenius_inner: dims " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
  // tr(AB) = sum_ij A_ij * B_ji = sum_ij A_ij * conj(B_ij) for Hermitian B.
  return a.mat().cwiseProduct(b.mat().conjugate()).sum().real();
}

Eigen::VectorXd hermitian_eigenvalues(const Hermitian& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed");
  return solver.eigenvalues();
}

MatrixNorms norms(const Hermitian& a) {
  MatrixNorms out;
  if (a.dim() == 0) return out;
  const Eigen::VectorXd ev = hermitian_eigenvalues(a);
  out.frobenius = ev.norm();
  out.op = ev.cwiseAbs().maxCoeff();
  out.nuclear = ev.cwiseAbs().sum();
  return out;
}

int numerical_rank(const Hermitian& a) {
  if (a.dim() == 0) return 0;
  const Eigen::VectorXd ev = hermitian_eigenvalues(a);
  const double cutoff = 1e-12 * ev.cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff) ++rank;
  return rank;
}

Hermitian svd_soft_threshold(const Hermitian& a, double threshold) {
  if (threshold < 0.0) throw InvalidArgument("svd_soft_threshold: threshold must be >= 0");
  if (threshold == 0.0) return a;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed in svd_soft_threshold");
  Eigen::VectorXd ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double mag = std::max(std::abs(ev(i)) - threshold, 0.0);
    ev(i) = std::copysign(mag, ev(i));
  }
  CMatrix rebuilt = solver.eigenvectors() * ev.asDiagonal() *
                    solver.eigenvectors().adjoint();
  return hermitian_unchecked(symmetrized(rebuilt));
}

BlockDiag::BlockDiag(std::vector<Hermitian> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InvalidArgument("BlockDiag requires at least one block");
  const Eigen::Index d = blocks_.front().dim();
  for (const auto& b : blocks_)
    if (b.dim() != d)
      throw DimensionMismatch("BlockDiag blocks must share one dimension");
}

Eigen::Index BlockDiag::block_dim() const {
  return blocks_.empty() ? 0 : blocks_.front().dim();
}

BlockDiag block_soft_threshold(const BlockDiag& s, double threshold) {
  std::vector<Hermitian> out;
  out.reserve(s.block_count());
  for (const auto& b : s.blocks()) out.push_back(svd_soft_threshold(b, threshold));
  return BlockDiag(std::move(out));
}

MatrixNorms norms(const BlockDiag& s) {
  MatrixNorms total;
  for (const auto& b : s.blocks()) {
    const MatrixNorms nb = norms(b);
    total.frobenius = std::hypot(total.frobenius, nb.frobenius);
    total.op = std::max(total.op, nb.op);
    total.nuclear += nb.nuclear;
  }
  return total;
}

void save_matrix(std::ostream& out, const Hermitian& a) {
  const Eigen::Index m = a.dim();
  out << m << "\n";
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      out << (i + 1) << " " << (j + 1) << " " << a(i, j).real() << " "
          << a(i, j).imag() << "\n";
}

void save_matrix(const std::string& path, const Hermitian& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  save_matrix(out, a);
  if (!out) throw IoError("write failed: " + path);
}

Hermitian load_matrix(std::istream& in) {
  Eigen::Index m = 0;
  if (!(in >> m) || m <= 0) throw IoError("matrix file: bad header");
  CMatrix acc = CMatrix::Zero(m, m);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(m, m);
  Eigen::Index row, col;
  double re, im;
  while (in >> row >> col >> re >> im) {
    if (row < 1 || row > m || col < 1 || col > m)
      throw IoError("matrix file: entry out of range");
    acc(row - 1, col - 1) = Complex(re, im);
    seen(row - 1, col - 1) = 1;
  }
  // Upper triangle is sufficient; mirror whatever side was given.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!seen(i, i)) throw IoError("matrix file: missing diagonal entry");
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (seen(i, j) && !seen(j, i)) acc(j, i) = std::conj(acc(i, j));
      else if (seen(j, i) && !seen(i, j)) acc(i, j) = std::conj(acc(j, i));
      else if (!seen(i, j) && !seen(j, i))
        throw IoError("matrix file: missing entry (" + std::to_string(i + 1) +
                      "," + std::to_string(j + 1) + ")");
    }
  }
  return Hermitian(acc);
}

Hermitian load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return load_matrix(in);
}

}  // namespace lrmf
