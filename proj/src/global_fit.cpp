#include "lrmf/global_fit.hpp"

#include <cmath>

#include "lrmf/parallel.hpp"

namespace lrmf {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

void add_coordinate(CMatrix& target, const BasisIndex& idx, double v) {
  const int r = idx.k - 1, c = idx.j - 1;
  switch (idx.kind) {
    case BasisKind::Diagonal:
      target(r, r) += v;
      break;
    case BasisKind::RealSym:
      target(r, c) += v / kSqrt2;
      target(c, r) += v / kSqrt2;
      break;
    case BasisKind::ImagAntisym:
      target(r, c) += Complex(0.0, v / kSqrt2);
      target(c, r) += Complex(0.0, -v / kSqrt2);
      break;
  }
}

}  // namespace

GlobalEstimate::GlobalEstimate(std::vector<BlockDiagEstimate> tiles, int m_tiles)
    : tiles_(std::move(tiles)), m_tiles_(m_tiles) {
  if (m_tiles_ < 2 || m_tiles_ % 2 != 0)
    throw InvalidArgument("GlobalEstimate: tile grid must be even and >= 2");
  if (tiles_.size() != static_cast<std::size_t>(m_tiles_ / 2))
    throw InvalidArgument("GlobalEstimate: expected M/2 tiles");
}

std::size_t GlobalEstimate::covering_tile(double t) const {
  if (!(t > 0.0) || t > 1.0)
    throw InvalidArgument("evaluate_global: t must lie in (0, 1]");
  // Tile k (1-based) owns (2(k-1)/M, 2k/M].
  const std::size_t k =
      static_cast<std::size_t>(std::ceil(t * m_tiles_ / 2.0 - 1e-12));
  return std::min(std::max<std::size_t>(k, 1), tiles_.size()) - 1;
}

GlobalEstimate fit_global(const Dataset& data, double h, int degree,
                          double epsilon, PolyFamily family,
                          const AdmmSettings& admm) {
  if (!(h > 0.0) || h > 1.0) throw InvalidArgument("fit_global: h must be in (0,1]");
  int m_tiles = static_cast<int>(std::ceil(1.0 / h));
  if (m_tiles % 2 != 0) ++m_tiles;
  if (m_tiles < 2) m_tiles = 2;
  const double width = 1.0 / m_tiles;
  const int tile_count = m_tiles / 2;

  std::vector<BlockDiagEstimate> tiles(tile_count);
  std::vector<std::string> failures(tile_count);
  parallel_for(tile_count, [&](int k) {
    const double center = (2.0 * k + 1.0) / m_tiles;
    LocalFitConfig config = make_local_config(center, width, degree, epsilon,
                                              family, data.a());
    config.rho_scale = admm.rho_scale;
    config.max_iterations = admm.max_iterations;
    config.eps_tol = admm.eps_tol;
    try {
      tiles[k] = fit_pointwise(data, config);
    } catch (const EmptyWindow&) {
      failures[k] = "tile " + std::to_string(k + 1) + "/" +
                    std::to_string(tile_count) + " around t=" +
                    std::to_string(center) + " has no data";
    }
  });
  for (const auto& failure : failures)
    if (!failure.empty()) throw EmptyWindow("fit_global: " + failure);
  return GlobalEstimate(std::move(tiles), m_tiles);
}

Hermitian evaluate_global(const GlobalEstimate& est, double t) {
  return evaluate_local(est.tiles()[est.covering_tile(t)], t);
}

double global_coordinate(const GlobalEstimate& est, double t,
                         const BasisIndex& idx) {
  if (t <= 0.0) return 0.0;  // outside the tiled range; zero by convention
  return local_coordinate(est.tiles()[est.covering_tile(t)], t, idx);
}

Hermitian fit_kernel_estimator(const Dataset& data, double t,
                               const KernelEstimateConfig& config) {
  if (!(config.h > 0.0)) throw InvalidArgument("fit_kernel_estimator: h must be > 0");
  const int m = data.m();
  const auto [lo, hi] = data.window(t - config.h, t + config.h);
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(m * m);
  for (std::size_t w = lo; w < hi; ++w) {
    const auto& o = data.observations()[data.sorted_by_tau()[w]];
    const double kw = config.kernel.eval((o.tau - t) / config.h);
    if (kw == 0.0) continue;
    coords(o.x.ordinal(m)) += kw * o.y;
  }
  coords *= static_cast<double>(m) * m /
            (static_cast<double>(data.size()) * config.h);
  CMatrix out = CMatrix::Zero(m, m);
  for (int c = 0; c < m * m; ++c)
    if (coords(c) != 0.0) add_coordinate(out, BasisIndex::from_ordinal(m, c), coords(c));
  Hermitian estimate = hermitian_unchecked(std::move(out));
  if (config.post_threshold > 0.0)
    estimate = svd_soft_threshold(estimate, config.post_threshold);
  return estimate;
}

double kernel_bandwidth(int m, std::size_t n, int degree, double beta,
                        double holder_l, double a, double c_star) {
  if (m <= 0 || n < 2 || degree < 0 || beta <= 0.0 || holder_l <= 0.0 ||
      a <= 0.0 || c_star <= 0.0)
    throw InvalidArgument("kernel_bandwidth: inputs must be positive (n >= 2)");
  double factorial = 1.0;
  for (int i = 2; i <= degree; ++i) factorial *= i;
  const double numerator =
      a * a * factorial * factorial * m * std::log(static_cast<double>(n));
  const double h = c_star * std::pow(numerator / (2.0 * beta * holder_l *
                                                  holder_l * n),
                                     1.0 / (2.0 * beta + 1.0));
  return std::min(h, 0.5);
}

double pointwise_risk(const Hermitian& est, const Hermitian& truth) {
  if (est.dim() != truth.dim())
    throw DimensionMismatch("pointwise_risk: dimension mismatch");
  const double m = static_cast<double>(est.dim());
  return (est.mat() - truth.mat()).squaredNorm() / (m * m);
}

double integrated_l2_risk(const GlobalEstimate& est,
                          const MatrixFunctionSpec& truth, int grid_points) {
  if (grid_points < 64) throw InvalidArgument("integrated_l2_risk: need >= 64 grid points");
  const int g = grid_points;
  // Trapezoid on the nodes i/g, i=1..g, plus a flat strip for (0, 1/g].
  double acc = 0.0;
  for (int i = 1; i <= g; ++i) {
    const double t = static_cast<double>(i) / g;
    const double value = pointwise_risk(evaluate_global(est, t), truth.value(t));
    if (i == 1) acc += 1.5 * value;
    else if (i == g) acc += 0.5 * value;
    else acc += value;
  }
  return acc / g;
}

IntegratedRiskDiagnostic integrated_l2_risk_diagnostic(
    const GlobalEstimate& est, const MatrixFunctionSpec& truth,
    int grid_points) {
  IntegratedRiskDiagnostic out;
  out.value = integrated_l2_risk(est, truth, grid_points);
  out.refined = integrated_l2_risk(est, truth, 2 * grid_points);
  out.refinement_delta = std::abs(out.refined - out.value);
  return out;
}

double sup_opnorm_risk(const std::vector<Hermitian>& estimates,
                       const std::vector<Hermitian>& truths) {
  if (estimates.empty() || estimates.size() != truths.size())
    throw InvalidArgument("sup_opnorm_risk: empty or misaligned grids");
  double sup = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const Hermitian diff = hermitian_unchecked(estimates[i].mat() - truths[i].mat());
    const double m = static_cast<double>(diff.dim());
    const double op = norms(diff).op;
    sup = std::max(sup, op * op / (m * m));
  }
  return sup;
}

double kernel_sup_risk(const Dataset& data, const MatrixFunctionSpec& truth,
                       const KernelEstimateConfig& config, double lo,
                       double hi) {
  if (lo < 0.0) lo = config.h;
  if (hi < 0.0) hi = 1.0 - config.h;
  if (!(lo <= hi)) throw InvalidArgument("kernel_sup_risk: empty grid range");
  std::vector<double> nodes;
  for (int i = 1; i <= config.grid_points; ++i) {
    const double t = static_cast<double>(i) / config.grid_points;
    if (t >= lo && t <= hi) nodes.push_back(t);
  }
  if (nodes.empty()) throw InvalidArgument("kernel_sup_risk: no grid nodes in range");
  std::vector<double> risks(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), [&](int i) {
    const Hermitian est = fit_kernel_estimator(data, nodes[i], config);
    const Hermitian diff =
        hermitian_unchecked(est.mat() - truth.value(nodes[i]).mat());
    const double m = static_cast<double>(diff.dim());
    const double op = norms(diff).op;
    risks[i] = op * op / (m * m);
  });
  double sup = 0.0;
  for (const double r : risks) sup = std::max(sup, r);
  return sup;
}

double theoretical_rate(RateKind kind, int m, int r, std::size_t n, double beta,
                        double constant) {
  if (m <= 0 || r <= 0 || n < 2 || beta <= 0.0)
    throw InvalidArgument("theoretical_rate: inputs must be positive (n >= 2)");
  const double logn = std::log(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  double base = 0.0;
  switch (kind) {
    case RateKind::PointwiseUpper:
    case RateKind::L2Upper:
      base = m * r * logn / dn;
      break;
    case RateKind::SupUpper:
      base = m * logn / dn;
      break;
    case RateKind::PointwiseLower:
    case RateKind::L2Lower:
      base = m * r / dn;
      break;
    case RateKind::SupLower:
      base = std::max(static_cast<double>(m), logn) / dn;
      break;
  }
  return constant * std::pow(base, 2.0 * beta / (2.0 * beta + 1.0));
}

}  // namespace lrmf
