#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lrmf/sampling.hpp"

namespace lrmf {

/// Natural cubic spline through equally spaced knots on [0,1]; C^2, so its
/// first derivative is Lipschitz with constant sup|f''|.
class CubicSpline {
 public:
  CubicSpline() = default;
  explicit CubicSpline(std::vector<double> knot_values);

  double value(double t) const;
  double deriv(double t) const;
  double second(double t) const;
  void scale(double s);

 private:
  int segments_ = 0;
  double dt_ = 0.0;
  std::vector<double> values_;
  std::vector<double> curvature_;  // second derivatives at the knots
};

enum class TruthVariant { Constant, FactorModel, Diffusion, EuclideanDistance };
enum class NoiseKind { Uniform, TwoPoint };

/// Synthetic ground-truth generator A : [0,1] -> Hermitian(m) with rank and
/// entrywise smoothness budgets. Construction rescales the raw random draw so
/// that the inner-product amplitude of A and A' stays within a1 and sup|A''|
/// stays within the smoothness constant.
class MatrixFunctionSpec {
 public:
  static MatrixFunctionSpec constant(const Hermitian& a0);
  static MatrixFunctionSpec factor_model(int m, int r, double beta,
                                         double holder_l, double a1,
                                         std::uint64_t seed, int knots = 8);
  static MatrixFunctionSpec diffusion(const Hermitian& a0,
                                      std::vector<double> f_coeffs, double beta,
                                      double holder_l, double a1);

  /// Diffusion with the profile f(t) = sum_k c_k |t - t_k|^{3/2}: the sharpest
  /// member of the beta = 3/2 smoothness class (its derivative is exactly
  /// 1/2-Hoelder at the kinks), for workloads that must exercise the class
  /// boundary rather than a C^2 surrogate.
  static MatrixFunctionSpec diffusion_rough(const Hermitian& a0,
                                            std::vector<double> kink_centers,
                                            std::vector<double> kink_coeffs,
                                            std::vector<double> poly_coeffs,
                                            double holder_l, double a1);
  static MatrixFunctionSpec euclidean_distance(int m, int d, double beta,
                                               double holder_l, double a1,
                                               std::uint64_t seed,
                                               int knots = 8);

  TruthVariant variant() const { return variant_; }
  int m() const { return m_; }
  int rank_bound() const { return rank_bound_; }
  double beta() const { return beta_; }
  double holder_l() const { return holder_l_; }
  double a1() const { return a1_; }

  /// A(t); throws outside [0,1].
  Hermitian value(double t) const;

  /// <A(t), basis_element(idx)> computed from the touched entries only.
  double coordinate(double t, const BasisIndex& idx) const;

  /// Factor matrix P(t) for the factor model (m x r).
  Eigen::MatrixXd factor_value(double t) const;

  /// Grid maximum of |<A(t), X>| over all basis elements.
  double realized_amplitude() const { return realized_amplitude_; }

  /// Grid maxima of the numerical ranks of A, A', ..., up to floor(beta).
  const std::vector<int>& derivative_ranks() const { return derivative_ranks_; }

  std::string describe() const;

 private:
  MatrixFunctionSpec() = default;
  Eigen::MatrixXd dense_real(double t) const;        // real representation
  Eigen::MatrixXd dense_real_deriv(double t, int order) const;
  void finalize(double a1, double holder_l);          // rescale + metadata

  TruthVariant variant_ = TruthVariant::Constant;
  int m_ = 0;
  int rank_bound_ = 0;
  double beta_ = 1.5;
  double holder_l_ = 24.0;
  double a1_ = 1.0;
  double realized_amplitude_ = 0.0;
  std::vector<int> derivative_ranks_;
  std::string label_;

  // Constant / Diffusion
  Hermitian a0_;
  std::vector<double> f_coeffs_;
  std::vector<double> kink_centers_, kink_coeffs_;  // rough diffusion profile
  // FactorModel: m*r curves (row-major); EuclideanDistance: m*d curves
  int cols_ = 0;
  std::vector<CubicSpline> curves_;
};

Hermitian evaluate_truth(const MatrixFunctionSpec& spec, double t);

/// n i.i.d. draws of (tau, X, y): tau uniform on [0,1], X uniform over the
/// m^2 basis indices, y = <A(tau), X> + noise with mean-zero bounded noise of
/// half-width noise_level. Reproducible from the seed.
Dataset generate_dataset(const MatrixFunctionSpec& spec, std::size_t n,
                         double noise_level, std::uint64_t seed,
                         NoiseKind noise = NoiseKind::Uniform);

}  // namespace lrmf
