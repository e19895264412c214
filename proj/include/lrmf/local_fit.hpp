#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "lrmf/poly.hpp"
#include "lrmf/sampling.hpp"

namespace lrmf {

/// Settings for one windowed penalized fit around t0.
struct LocalFitConfig {
  double t0 = 0.5;
  double h = 0.1;          // window half-width, in (0, 1]
  int degree = 1;          // polynomial order; block count is degree+1
  double epsilon = 0.0;    // nuclear-norm penalty weight
  OrthoPolyBasis basis;    // orthonormal system matching the window weight
  double rho_scale = 1.0;  // splitting parameter, relative to the data scale
  int max_iterations = 2000;
  double eps_tol = 1e-8;
  double entry_bound = 0.0;  // |S_ij| box reported (not enforced) by the fit
  bool track_objective = false;

  void validate() const;
};

/// Convenience constructor: builds the basis for `family` at `degree` and
/// fills entry_bound with R(T)*a.
LocalFitConfig make_local_config(double t0, double h, int degree,
                                 double epsilon, PolyFamily family, double a);

struct AdmmDiagnostics {
  int iterations = 0;
  bool converged = false;
  double primal_residual_sq = 0.0;  // ||S - Sbar||_F^2 at exit
  double dual_residual = 0.0;       // rho * ||Sbar_{k+1} - Sbar_k||_F at exit
  double objective = 0.0;           // penalized objective at the returned point
  double rho = 0.0;                 // splitting parameter actually used
  bool entry_bound_violated = false;
  std::vector<double> objective_history;  // filled when track_objective is set
};

/// Result of a local fit: degree+1 Hermitian blocks plus window metadata.
class BlockDiagEstimate {
 public:
  BlockDiagEstimate() = default;
  BlockDiagEstimate(std::vector<Hermitian> blocks, LocalFitConfig config,
                    AdmmDiagnostics diagnostics);

  const std::vector<Hermitian>& blocks() const { return blocks_; }
  const LocalFitConfig& config() const { return config_; }
  const AdmmDiagnostics& diagnostics() const { return diagnostics_; }
  int m() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_[0].dim()); }

 private:
  std::vector<Hermitian> blocks_;
  LocalFitConfig config_;
  AdmmDiagnostics diagnostics_;
};

/// Fitted polynomial at tau; the zero matrix outside the window.
Hermitian evaluate_local(const BlockDiagEstimate& est, double tau);

/// Fitted value at the window center, sum_i S_i p_i(0).
Hermitian point_estimate(const BlockDiagEstimate& est);

/// One coordinate of evaluate_local(est, tau) without forming the matrix.
double local_coordinate(const BlockDiagEstimate& est, double tau,
                        const BasisIndex& idx);

/// Rate-optimal window width for the penalized local fit; the degree-cubed
/// factor is clamped below at one and the result is capped at 1/2.
double optimal_bandwidth(int m, int r, std::size_t n, int degree, double beta,
                         double holder_l, double a, double phi, double r_t,
                         double c1);

/// Penalty level eps = D (l+1) R(T) Phi a max(sqrt(log(2m)/(nmh)),
/// log(2m) Phi / (nh)).
double penalty_epsilon(int m, std::size_t n, double h, int degree, double a,
                       double phi, double r_t, double d);

struct EpsilonCalibration {
  double epsilon = 0.0;       // calibrated penalty level
  double noise_opnorm = 0.0;  // Monte Carlo mean of the sign-flip operator norm
  double std_error = 0.0;
  int trials = 0;
};

/// Monte Carlo alternative to penalty_epsilon: estimates the expected operator
/// norm of the sign-randomized design average over the window and scales it by
/// c (l+1) R(T) Phi a / sqrt(h).
EpsilonCalibration calibrate_epsilon_mc(const Dataset& data,
                                        const LocalFitConfig& config,
                                        int trials, std::uint64_t seed,
                                        double scale_c = 1.0);

/// Windowed least-squares structure shared by all solver iterations. The data
/// term decouples over the m^2 basis coordinates because each sampling matrix
/// touches exactly one coordinate; every coordinate owns a (degree+1)-square
/// SPD ridge system whose factorization is cached.
class LocalLassoProblem {
 public:
  /// Rows = blocks 0..degree, columns = basis coordinates 0..m^2-1.
  using Coords = Eigen::MatrixXd;

  LocalLassoProblem(const Dataset& data, const LocalFitConfig& config);

  int m() const { return m_; }
  int degree() const { return degree_; }
  std::size_t window_size() const { return u_.size(); }

  /// Splitting parameter: rho_scale times the mean diagonal of the coordinate
  /// ridge systems (falls back to rho_scale when the window carries no weight).
  double default_rho(double rho_scale) const;

  /// Caches the Cholesky factors of (G_c + rho I) for every coordinate.
  void factorize(double rho);

  /// Exact minimizer of the quadratic subproblem
  ///   data(S) + (rho/2)||S - Sbar||_F^2 + <Z, S - Sbar>,
  /// solved coordinate by coordinate. Requires factorize(rho) first.
  Coords s_update(const Coords& sbar, const Coords& z) const;

  double data_term(const Coords& s) const;
  /// data_term + epsilon * (sum of block nuclear norms).
  double objective(const Coords& s) const;

  Hermitian block_matrix(const Coords& coords, int block) const;
  std::vector<Hermitian> to_blocks(const Coords& coords) const;
  Coords from_blocks(const std::vector<Hermitian>& blocks) const;
  Coords zero_coords() const;

 private:
  int m_ = 0;
  int degree_ = 0;
  double epsilon_ = 0.0;
  double inv_nh_ = 0.0;
  std::vector<double> u_, w_, y_;   // in-window scaled abscissae/weights/responses
  std::vector<int> coord_;          // coordinate ordinal per window observation
  Eigen::MatrixXd p_;               // p_(i, j) = p_i(u_j)
  std::vector<Eigen::MatrixXd> gram_;     // per-coordinate G_c
  std::vector<Eigen::VectorXd> linear_;   // per-coordinate b_c
  std::vector<Eigen::LLT<Eigen::MatrixXd>> ridge_;
  double rho_ = -1.0;
};

/// Nuclear-norm penalized local polynomial fit solved by operator splitting:
/// an exact quadratic update, a per-block eigenvalue shrinkage, and a dual
/// step, stopping on successive-iterate or dual-increment tolerance.
BlockDiagEstimate fit_pointwise(const Dataset& data, const LocalFitConfig& config);

/// Writes `<prefix>_block<i>.mat` in the matrix text format for every block
/// plus a `<prefix>.diag` key-value sidecar (window, solver settings, and the
/// convergence diagnostics).
void save_fit(const BlockDiagEstimate& est, const std::string& prefix);

}  // namespace lrmf
