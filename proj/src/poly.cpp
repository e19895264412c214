#include "lrmf/poly.hpp"

#include <cmath>
#include <numbers>

namespace lrmf {

namespace {

constexpr double kPi = std::numbers::pi;

double eval_monomial(const Eigen::VectorXd& coeffs, double u) {
  double acc = 0.0;
  for (Eigen::Index i = coeffs.size() - 1; i >= 0; --i) acc = acc * u + coeffs(i);
  return acc;
}

Eigen::VectorXd derivative_coeffs(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d(coeffs.size() - 1);
  for (Eigen::Index i = 1; i < coeffs.size(); ++i) d(i - 1) = coeffs(i) * static_cast<double>(i);
  return d;
}

/// Monomial coefficient rows of the raw (unnormalized) family polynomials.
Eigen::MatrixXd raw_family_coeffs(PolyFamily family, int degree) {
  const int n = degree + 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  c(0, 0) = 1.0;
  if (degree >= 1) c(1, 1) = (family == PolyFamily::ChebyshevU) ? 2.0 : 1.0;
  for (int i = 2; i <= degree; ++i) {
    if (family == PolyFamily::ChebyshevU) {
      // U_{i} = 2u U_{i-1} - U_{i-2}
      for (int p = 0; p + 1 < n; ++p) c(i, p + 1) += 2.0 * c(i - 1, p);
      c.row(i) -= c.row(i - 2);
    } else {
      // (i) P_i = (2i-1) u P_{i-1} - (i-1) P_{i-2}
      for (int p = 0; p + 1 < n; ++p)
        c(i, p + 1) += (2.0 * i - 1.0) / i * c(i - 1, p);
      c.row(i) -= (i - 1.0) / i * c.row(i - 2);
    }
  }
  return c;
}

}  // namespace

QuadRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come
  // from the first eigenvector components.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights(k) = 2.0 * v0 * v0;
  }
  return rule;
}

QuadRule gauss_chebyshev_u(int n) {
  if (n < 1) throw InvalidArgument("gauss_chebyshev_u: need at least one node");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 1; k <= n; ++k) {
    const double theta = k * kPi / (n + 1.0);
    rule.nodes(k - 1) = std::cos(theta);
    const double s = std::sin(theta);
    rule.weights(k - 1) = kPi / (n + 1.0) * s * s;
  }
  return rule;
}

OrthoPolyBasis OrthoPolyBasis::build(PolyFamily family, int degree) {
  if (degree < 0) throw InvalidArgument("basis degree must be >= 0");
  OrthoPolyBasis basis;
  basis.family_ = family;
  basis.degree_ = degree;
  basis.coeffs_ = raw_family_coeffs(family, degree);
  for (int i = 0; i <= degree; ++i) {
    const double scale = (family == PolyFamily::ChebyshevU)
                             ? std::sqrt(2.0 / kPi)
                             : std::sqrt((2.0 * i + 1.0) / 2.0);
    basis.coeffs_.row(i) *= scale;
  }
  // Dense grid max of |sqrt(K) p_i| on [-1,1].
  const int grid = 10000;
  double phi = 0.0;
  for (int g = 0; g <= grid; ++g) {
    const double u = -1.0 + 2.0 * g / grid;
    const double w = std::sqrt(basis.weight(u));
    for (int i = 0; i <= degree; ++i)
      phi = std::max(phi, std::abs(w * basis.eval(i, u)));
  }
  basis.phi_ = phi;
  return basis;
}

double OrthoPolyBasis::eval(int i, double u) const {
  if (i < 0 || i > degree_) throw InvalidArgument("polynomial index out of range");
  return eval_monomial(coeffs_.row(i).transpose(), u);
}

double OrthoPolyBasis::weight(double u) const {
  if (u < -1.0 || u > 1.0) return 0.0;
  if (family_ == PolyFamily::ChebyshevU) return std::sqrt(std::max(0.0, 1.0 - u * u));
  return 1.0;
}

MonomialTransform monomial_transform(const OrthoPolyBasis& basis) {
  const int n = basis.degree() + 1;
  // coeffs is lower triangular with p_i's leading coefficient on the diagonal;
  // a zero diagonal would mean a degenerate table.
  for (int i = 0; i < n; ++i)
    if (basis.coeffs()(i, i) == 0.0)
      throw NumericalError("monomial_transform: singular coefficient table");
  // With p = C u_vec (u_vec the monomials), the scaled monomials are
  // D u_vec = D C^{-1} p, so T = D C^{-1} with D = diag(1/i!).
  Eigen::MatrixXd c_inv = basis.coeffs()
                              .triangularView<Eigen::Lower>()
                              .solve(Eigen::MatrixXd::Identity(n, n));
  double factorial = 1.0;
  for (int i = 0; i < n; ++i) {
    if (i > 0) factorial *= i;
    c_inv.row(i) /= factorial;
  }
  MonomialTransform out;
  out.degree = basis.degree();
  out.t = c_inv;
  out.r_t = c_inv.cwiseAbs().colwise().sum().maxCoeff();
  return out;
}

HigherOrderKernel HigherOrderKernel::build(int order) {
  if (order < 0) throw InvalidArgument("kernel order must be >= 0");
  const OrthoPolyBasis legendre = OrthoPolyBasis::build(PolyFamily::LegendreBox, order);
  HigherOrderKernel kernel;
  kernel.order_ = order;
  kernel.coeffs_ = Eigen::VectorXd::Zero(order + 1);
  for (int j = 0; j <= order; ++j) {
    const double pj0 = legendre.eval(j, 0.0);
    if (pj0 == 0.0) continue;
    kernel.coeffs_ += pj0 * legendre.coeffs().row(j).transpose();
  }
  const QuadRule rule = gauss_legendre(64);
  double r_k = 0.0;
  for (int q = 0; q < rule.nodes.size(); ++q) {
    const double v = eval_monomial(kernel.coeffs_, rule.nodes(q));
    r_k += rule.weights(q) * v * v;
  }
  kernel.r_k_ = r_k;
  const Eigen::VectorXd dcoeffs = derivative_coeffs(kernel.coeffs_);
  double lip = 0.0;
  const int grid = 10000;
  for (int g = 0; g <= grid; ++g) {
    const double u = -1.0 + 2.0 * g / grid;
    lip = std::max(lip, std::abs(eval_monomial(dcoeffs, u)));
  }
  kernel.lipschitz_ = lip;
  return kernel;
}

double HigherOrderKernel::eval(double u) const {
  if (u < -1.0 || u > 1.0) return 0.0;
  return eval_monomial(coeffs_, u);
}

}  // namespace lrmf
