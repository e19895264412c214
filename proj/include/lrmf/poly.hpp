#pragma once

#include <Eigen/Dense>

#include "lrmf/errors.hpp"

namespace lrmf {

/// Quadrature rule on [-1, 1].
struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule (weight 1), exact for polynomials up to degree 2n-1.
QuadRule gauss_legendre(int n);

/// Gauss rule for weight sqrt(1-u^2), exact up to degree 2n-1.
QuadRule gauss_chebyshev_u(int n);

enum class PolyFamily { LegendreBox, ChebyshevU };

/// Polynomials p_0..p_l orthonormal for the family weight on [-1,1]:
///   LegendreBox: weight 1, normalized Legendre polynomials;
///   ChebyshevU:  weight sqrt(1-u^2), scaled Chebyshev-U polynomials.
class OrthoPolyBasis {
 public:
  static OrthoPolyBasis build(PolyFamily family, int degree);

  PolyFamily family() const { return family_; }
  int degree() const { return degree_; }

  /// Value of p_i at u (valid for any real u).
  double eval(int i, double u) const;

  /// Family weight at u; zero outside [-1, 1].
  double weight(double u) const;

  /// max_i sup_{|u|<=1} |sqrt(weight(u)) * p_i(u)|, by dense grid search.
  double phi() const { return phi_; }

  /// Row i holds the monomial coefficients of p_i (lower triangular).
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }

 private:
  PolyFamily family_ = PolyFamily::LegendreBox;
  int degree_ = 0;
  Eigen::MatrixXd coeffs_;
  double phi_ = 0.0;
};

/// Change of basis T with (1, t, t^2/2!, ..., t^l/l!)^T = T (p_0, ..., p_l)^T,
/// and the column norm R(T) = max_j sum_i |T_ij|.
struct MonomialTransform {
  int degree = 0;
  Eigen::MatrixXd t;
  double r_t = 0.0;
};

MonomialTransform monomial_transform(const OrthoPolyBasis& basis);

/// Symmetric polynomial kernel on [-1,1] whose moments 1..order vanish and
/// whose integral is one, built from orthonormal Legendre polynomials as
/// K(u) = sum_j phi_j(0) phi_j(u).
class HigherOrderKernel {
 public:
  static HigherOrderKernel build(int order);

  int order() const { return order_; }

  /// K(u); zero outside [-1,1].
  double eval(double u) const;

  /// Integral of K^2 over the support.
  double r_k() const { return r_k_; }

  /// Lipschitz constant of the polynomial part (sup |K'| on [-1,1]).
  double lipschitz() const { return lipschitz_; }

  const Eigen::VectorXd& coeffs() const { return coeffs_; }

 private:
  int order_ = 0;
  Eigen::VectorXd coeffs_;  // monomial coefficients
  double r_k_ = 0.0;
  double lipschitz_ = 0.0;
};

}  // namespace lrmf
