#pragma once

#include <vector>

#include "lrmf/local_fit.hpp"
#include "lrmf/truth.hpp"

namespace lrmf {

struct AdmmSettings {
  double rho_scale = 1.0;
  int max_iterations = 2000;
  double eps_tol = 1e-8;
};

/// Piecewise local polynomial estimator: one windowed fit per odd grid point
/// t_{2k-1} = (2k-1)/M, with half-open tiles (t_{2k-1} - 1/M, t_{2k-1} + 1/M]
/// partitioning (0, 1].
class GlobalEstimate {
 public:
  GlobalEstimate() = default;
  GlobalEstimate(std::vector<BlockDiagEstimate> tiles, int m_tiles);

  /// Even tile-grid size M; there are M/2 local fits.
  int tile_grid() const { return m_tiles_; }
  double tile_halfwidth() const { return 1.0 / m_tiles_; }
  const std::vector<BlockDiagEstimate>& tiles() const { return tiles_; }

  /// Index of the covering tile for t in (0, 1].
  std::size_t covering_tile(double t) const;

 private:
  std::vector<BlockDiagEstimate> tiles_;
  int m_tiles_ = 0;
};

/// Requested width h fixes M = ceil(1/h) rounded up to even; each tile is fit
/// with bandwidth 1/M so the windows partition (0, 1] exactly. Throws
/// EmptyWindow naming the tile if any window holds no data.
GlobalEstimate fit_global(const Dataset& data, double h, int degree,
                          double epsilon, PolyFamily family,
                          const AdmmSettings& admm = {});

/// Value of the covering tile's polynomial; t must lie in (0, 1].
Hermitian evaluate_global(const GlobalEstimate& est, double t);

/// One coordinate of evaluate_global without forming the matrix.
double global_coordinate(const GlobalEstimate& est, double t,
                         const BasisIndex& idx);

struct KernelEstimateConfig {
  HigherOrderKernel kernel;
  double h = 0.1;
  int grid_points = 512;
  /// Optional post-hoc eigenvalue shrinkage of the estimate (experimental).
  double post_threshold = 0.0;
};

/// Weighted design average (m^2/nh) sum_j K((tau_j - t)/h) y_j X_j, assembled
/// sparsely per coordinate. An empty window legitimately yields zero.
Hermitian fit_kernel_estimator(const Dataset& data, double t,
                               const KernelEstimateConfig& config);

/// Bias-variance balancing width for the kernel estimator, capped at 1/2.
double kernel_bandwidth(int m, std::size_t n, int degree, double beta,
                        double holder_l, double a, double c_star);

/// Normalized squared Frobenius distance (1/m^2) ||est - truth||_F^2.
double pointwise_risk(const Hermitian& est, const Hermitian& truth);

/// Trapezoid quadrature of pointwise_risk over a uniform grid on (0, 1].
double integrated_l2_risk(const GlobalEstimate& est,
                          const MatrixFunctionSpec& truth, int grid_points);

struct IntegratedRiskDiagnostic {
  double value = 0.0;             // at the requested grid
  double refined = 0.0;           // at twice the grid
  double refinement_delta = 0.0;  // |refined - value|, a quadrature error probe
};

/// integrated_l2_risk together with a grid-doubling error estimate.
IntegratedRiskDiagnostic integrated_l2_risk_diagnostic(
    const GlobalEstimate& est, const MatrixFunctionSpec& truth,
    int grid_points);

/// Max over aligned pairs of (1/m^2) * (operator norm of difference)^2.
double sup_opnorm_risk(const std::vector<Hermitian>& estimates,
                       const std::vector<Hermitian>& truths);

/// Kernel-estimator sup risk over the uniform grid restricted to [h, 1-h]
/// (or to [lo, hi] when an explicit restriction is given).
double kernel_sup_risk(const Dataset& data, const MatrixFunctionSpec& truth,
                       const KernelEstimateConfig& config, double lo = -1.0,
                       double hi = -1.0);

enum class RateKind {
  PointwiseUpper,
  L2Upper,
  SupUpper,
  PointwiseLower,
  L2Lower,
  SupLower,
};

/// Reference risk curves: constant times the matching power of
/// (effective dimension / n) with exponent 2*beta/(2*beta+1).
double theoretical_rate(RateKind kind, int m, int r, std::size_t n, double beta,
                        double constant);

}  // namespace lrmf
