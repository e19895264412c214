#include "lrmf/local_fit.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "lrmf/rng.hpp"

namespace lrmf {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

/// Writes coordinate c of a Hermitian accumulator. v is the coefficient of
/// the unit-norm basis element at that coordinate.
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

double read_coordinate(const CMatrix& source, const BasisIndex& idx) {
  const int r = idx.k - 1, c = idx.j - 1;
  switch (idx.kind) {
    case BasisKind::Diagonal: return source(r, r).real();
    case BasisKind::RealSym: return kSqrt2 * source(r, c).real();
    case BasisKind::ImagAntisym: return kSqrt2 * source(r, c).imag();
  }
  return 0.0;
}

}  // namespace

void LocalFitConfig::validate() const {
  if (!(h > 0.0) || h > 1.0) throw InvalidArgument("LocalFitConfig: h must be in (0,1]");
  if (t0 < 0.0 || t0 > 1.0) throw InvalidArgument("LocalFitConfig: t0 must be in [0,1]");
  if (degree < 0) throw InvalidArgument("LocalFitConfig: degree must be >= 0");
  if (epsilon < 0.0) throw InvalidArgument("LocalFitConfig: epsilon must be >= 0");
  if (basis.degree() != degree)
    throw InvalidArgument("LocalFitConfig: basis degree does not match");
  if (max_iterations < 1) throw InvalidArgument("LocalFitConfig: max_iterations");
  if (!(eps_tol > 0.0)) throw InvalidArgument("LocalFitConfig: eps_tol");
  if (!(rho_scale > 0.0)) throw InvalidArgument("LocalFitConfig: rho_scale");
}

LocalFitConfig make_local_config(double t0, double h, int degree,
                                 double epsilon, PolyFamily family, double a) {
  LocalFitConfig config;
  config.t0 = t0;
  config.h = h;
  config.degree = degree;
  config.epsilon = epsilon;
  config.basis = OrthoPolyBasis::build(family, degree);
  config.entry_bound = monomial_transform(config.basis).r_t * a;
  config.validate();
  return config;
}

BlockDiagEstimate::BlockDiagEstimate(std::vector<Hermitian> blocks,
                                     LocalFitConfig config,
                                     AdmmDiagnostics diagnostics)
    : blocks_(std::move(blocks)),
      config_(std::move(config)),
      diagnostics_(std::move(diagnostics)) {
  if (blocks_.size() != static_cast<std::size_t>(config_.degree + 1))
    throw InvalidArgument("BlockDiagEstimate: block count != degree+1");
}

Hermitian evaluate_local(const BlockDiagEstimate& est, double tau) {
  const double u = (tau - est.config().t0) / est.config().h;
  const Eigen::Index m = est.blocks().front().dim();
  if (std::abs(u) > 1.0) return Hermitian::Zero(m);
  CMatrix acc = CMatrix::Zero(m, m);
  for (int i = 0; i <= est.config().degree; ++i)
    acc += est.config().basis.eval(i, u) * est.blocks()[i].mat();
  return hermitian_unchecked(std::move(acc));
}

Hermitian point_estimate(const BlockDiagEstimate& est) {
  return evaluate_local(est, est.config().t0);
}

double local_coordinate(const BlockDiagEstimate& est, double tau,
                        const BasisIndex& idx) {
  const double u = (tau - est.config().t0) / est.config().h;
  if (std::abs(u) > 1.0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i <= est.config().degree; ++i)
    acc += est.config().basis.eval(i, u) * inner_with_basis(est.blocks()[i], idx);
  return acc;
}

double optimal_bandwidth(int m, int r, std::size_t n, int degree, double beta,
                         double holder_l, double a, double phi, double r_t,
                         double c1) {
  if (m <= 0 || r <= 0 || n < 2 || beta <= 0.0 || holder_l <= 0.0 || a <= 0.0 ||
      phi <= 0.0 || r_t <= 0.0 || c1 <= 0.0 || degree < 0)
    throw InvalidArgument("optimal_bandwidth: inputs must be positive (n >= 2)");
  const double l3 = std::pow(std::max(degree, 1), 3);
  double factorial = 1.0;
  for (int i = 2; i <= degree; ++i) factorial *= i;
  const double numerator = l3 * factorial * factorial * phi * phi * r_t * r_t *
                           a * a * m * r * std::log(static_cast<double>(n));
  const double h = c1 * std::pow(numerator / (holder_l * holder_l * n),
                                 1.0 / (2.0 * beta + 1.0));
  return std::min(h, 0.5);
}

double penalty_epsilon(int m, std::size_t n, double h, int degree, double a,
                       double phi, double r_t, double d) {
  if (m <= 0 || n < 1 || !(h > 0.0) || degree < 0 || a <= 0.0 || phi <= 0.0 ||
      r_t <= 0.0 || d <= 0.0)
    throw InvalidArgument("penalty_epsilon: inputs must be positive");
  const double log2m = std::log(2.0 * m);
  const double branch_sqrt = std::sqrt(log2m / (static_cast<double>(n) * m * h));
  const double branch_linear = log2m * phi / (static_cast<double>(n) * h);
  return d * (degree + 1) * r_t * phi * a * std::max(branch_sqrt, branch_linear);
}

EpsilonCalibration calibrate_epsilon_mc(const Dataset& data,
                                        const LocalFitConfig& config,
                                        int trials, std::uint64_t seed,
                                        double scale_c) {
  config.validate();
  if (trials < 10) throw InvalidArgument("calibrate_epsilon_mc: trials must be >= 10");
  const auto [lo, hi] = data.window(config.t0 - config.h, config.t0 + config.h);
  if (lo == hi)
    throw EmptyWindow("calibrate_epsilon_mc: no observations within h of t0");

  const int m = data.m();
  const int blocks = config.degree + 1;
  const std::size_t count = hi - lo;
  const double n = static_cast<double>(data.size());

  // Per-observation scale factors sqrt(K(u)/h) p_i(u) and coordinates.
  std::vector<int> coord(count);
  Eigen::MatrixXd scale(blocks, count);
  for (std::size_t w = 0; w < count; ++w) {
    const auto& o = data.observations()[data.sorted_by_tau()[lo + w]];
    const double u = (o.tau - config.t0) / config.h;
    const double root_weight = std::sqrt(config.basis.weight(u) / config.h);
    coord[w] = o.x.ordinal(m);
    for (int i = 0; i < blocks; ++i)
      scale(i, w) = root_weight * config.basis.eval(i, u);
  }

  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  Eigen::MatrixXd acc(blocks, m * m);
  std::vector<CMatrix> mats(blocks);
  for (int trial = 0; trial < trials; ++trial) {
    acc.setZero();
    for (std::size_t w = 0; w < count; ++w) {
      const double sign = static_cast<double>(rng.rademacher());
      for (int i = 0; i < blocks; ++i) acc(i, coord[w]) += sign * scale(i, w);
    }
    double opnorm = 0.0;
    for (int i = 0; i < blocks; ++i) {
      CMatrix mat = CMatrix::Zero(m, m);
      for (int c = 0; c < m * m; ++c) {
        if (acc(i, c) == 0.0) continue;
        add_coordinate(mat, BasisIndex::from_ordinal(m, c), acc(i, c) / n);
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat, Eigen::EigenvaluesOnly);
      opnorm = std::max(opnorm, solver.eigenvalues().cwiseAbs().maxCoeff());
    }
    sum += opnorm;
    sum_sq += opnorm * opnorm;
  }

  const double mean = sum / trials;
  const double variance = std::max(0.0, sum_sq / trials - mean * mean);
  const double r_t = monomial_transform(config.basis).r_t;
  EpsilonCalibration out;
  out.trials = trials;
  out.noise_opnorm = mean;
  out.std_error = std::sqrt(variance / trials);
  out.epsilon = scale_c * (config.degree + 1) * r_t * config.basis.phi() *
                data.a() / std::sqrt(config.h) * mean;
  return out;
}

LocalLassoProblem::LocalLassoProblem(const Dataset& data,
                                     const LocalFitConfig& config) {
  config.validate();
  m_ = data.m();
  degree_ = config.degree;
  epsilon_ = config.epsilon;
  inv_nh_ = 1.0 / (static_cast<double>(data.size()) * config.h);

  const auto [lo, hi] = data.window(config.t0 - config.h, config.t0 + config.h);
  if (lo == hi)
    throw EmptyWindow("fit window around t0=" + std::to_string(config.t0) +
                      " with h=" + std::to_string(config.h) + " is empty");
  const std::size_t count = hi - lo;
  u_.resize(count);
  w_.resize(count);
  y_.resize(count);
  coord_.resize(count);
  p_.resize(degree_ + 1, count);
  for (std::size_t w = 0; w < count; ++w) {
    const auto& o = data.observations()[data.sorted_by_tau()[lo + w]];
    u_[w] = (o.tau - config.t0) / config.h;
    w_[w] = config.basis.weight(u_[w]);
    y_[w] = o.y;
    coord_[w] = o.x.ordinal(m_);
    for (int i = 0; i <= degree_; ++i) p_(i, w) = config.basis.eval(i, u_[w]);
  }

  const int coords = m_ * m_;
  gram_.assign(coords, Eigen::MatrixXd::Zero(degree_ + 1, degree_ + 1));
  linear_.assign(coords, Eigen::VectorXd::Zero(degree_ + 1));
  for (std::size_t w = 0; w < count; ++w) {
    if (w_[w] == 0.0) continue;
    const double factor = 2.0 * inv_nh_ * w_[w];
    const Eigen::VectorXd pw = p_.col(w);
    gram_[coord_[w]].noalias() += factor * pw * pw.transpose();
    linear_[coord_[w]].noalias() += factor * y_[w] * pw;
  }
}

double LocalLassoProblem::default_rho(double rho_scale) const {
  double trace_sum = 0.0;
  for (const auto& g : gram_) trace_sum += g.trace();
  const double mean_diag = trace_sum / (static_cast<double>(gram_.size()) * (degree_ + 1));
  return mean_diag > 0.0 ? rho_scale * mean_diag : rho_scale;
}

void LocalLassoProblem::factorize(double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  rho_ = rho;
  ridge_.clear();
  ridge_.reserve(gram_.size());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(degree_ + 1, degree_ + 1);
  for (const auto& g : gram_) {
    Eigen::LLT<Eigen::MatrixXd> llt(g + rho * eye);
    if (llt.info() != Eigen::Success)
      throw NumericalError("coordinate ridge system is not positive definite");
    ridge_.push_back(std::move(llt));
  }
}

LocalLassoProblem::Coords LocalLassoProblem::s_update(const Coords& sbar,
                                                      const Coords& z) const {
  if (rho_ <= 0.0 || ridge_.size() != gram_.size())
    throw InvalidArgument("s_update: call factorize(rho) first");
  Coords out(degree_ + 1, m_ * m_);
  for (int c = 0; c < m_ * m_; ++c) {
    const Eigen::VectorXd rhs = linear_[c] + rho_ * sbar.col(c) - z.col(c);
    out.col(c) = ridge_[c].solve(rhs);
  }
  return out;
}

double LocalLassoProblem::data_term(const Coords& s) const {
  double acc = 0.0;
  for (std::size_t w = 0; w < u_.size(); ++w) {
    if (w_[w] == 0.0) continue;
    const double fitted = p_.col(w).dot(s.col(coord_[w]));
    const double residual = y_[w] - fitted;
    acc += w_[w] * residual * residual;
  }
  return acc * inv_nh_;
}

double LocalLassoProblem::objective(const Coords& s) const {
  double nuclear = 0.0;
  if (epsilon_ > 0.0)
    for (int i = 0; i <= degree_; ++i)
      nuclear += norms(block_matrix(s, i)).nuclear;
  return data_term(s) + epsilon_ * nuclear;
}

Hermitian LocalLassoProblem::block_matrix(const Coords& coords, int block) const {
  CMatrix mat = CMatrix::Zero(m_, m_);
  for (int c = 0; c < m_ * m_; ++c) {
    const double v = coords(block, c);
    if (v == 0.0) continue;
    add_coordinate(mat, BasisIndex::from_ordinal(m_, c), v);
  }
  return hermitian_unchecked(std::move(mat));
}

std::vector<Hermitian> LocalLassoProblem::to_blocks(const Coords& coords) const {
  std::vector<Hermitian> out;
  out.reserve(degree_ + 1);
  for (int i = 0; i <= degree_; ++i) out.push_back(block_matrix(coords, i));
  return out;
}

LocalLassoProblem::Coords LocalLassoProblem::from_blocks(
    const std::vector<Hermitian>& blocks) const {
  Coords out(degree_ + 1, m_ * m_);
  for (int i = 0; i <= degree_; ++i)
    for (int c = 0; c < m_ * m_; ++c)
      out(i, c) = read_coordinate(blocks.at(i).mat(), BasisIndex::from_ordinal(m_, c));
  return out;
}

LocalLassoProblem::Coords LocalLassoProblem::zero_coords() const {
  return Coords::Zero(degree_ + 1, m_ * m_);
}

BlockDiagEstimate fit_pointwise(const Dataset& data, const LocalFitConfig& config) {
  LocalLassoProblem problem(data, config);
  const double rho = problem.default_rho(config.rho_scale);
  problem.factorize(rho);

  const int m = problem.m();
  const int blocks = config.degree + 1;
  auto s = problem.zero_coords();
  auto sbar = problem.zero_coords();
  auto z = problem.zero_coords();

  AdmmDiagnostics diag;
  diag.rho = rho;
  const double threshold = config.epsilon / rho;

  for (int k = 0; k < config.max_iterations; ++k) {
    s = problem.s_update(sbar, z);

    LocalLassoProblem::Coords sbar_next(blocks, m * m);
    if (config.epsilon == 0.0) {
      sbar_next = s + z / rho;
    } else {
      const LocalLassoProblem::Coords shifted = s + z / rho;
      for (int i = 0; i < blocks; ++i) {
        const Hermitian prox =
            svd_soft_threshold(problem.block_matrix(shifted, i), threshold);
        for (int c = 0; c < m * m; ++c)
          sbar_next(i, c) = read_coordinate(prox.mat(), BasisIndex::from_ordinal(m, c));
      }
    }

    z += rho * (s - sbar_next);

    const double dsbar = (sbar_next - sbar).squaredNorm();
    const double primal = (s - sbar_next).squaredNorm();
    sbar = sbar_next;
    diag.iterations = k + 1;
    diag.primal_residual_sq = primal;
    diag.dual_residual = rho * std::sqrt(dsbar);
    if (config.track_objective)
      diag.objective_history.push_back(problem.objective(sbar));
    // ||Z_{k+1} - Z_k||^2 = rho^2 ||S - Sbar||^2, so the dual-increment test
    // reduces to the primal residual against eps_tol. Both increments must be
    // small: the dual one alone is identically zero when epsilon is zero.
    if (dsbar <= config.eps_tol && primal <= config.eps_tol) {
      diag.converged = true;
      break;
    }
  }

  diag.objective = problem.objective(sbar);
  std::vector<Hermitian> out_blocks = problem.to_blocks(sbar);
  if (config.entry_bound > 0.0) {
    for (const auto& b : out_blocks)
      if (b.mat().cwiseAbs().maxCoeff() > config.entry_bound * (1.0 + 1e-12))
        diag.entry_bound_violated = true;
  }
  return BlockDiagEstimate(std::move(out_blocks), config, std::move(diag));
}

void save_fit(const BlockDiagEstimate& est, const std::string& prefix) {
  for (std::size_t i = 0; i < est.blocks().size(); ++i)
    save_matrix(prefix + "_block" + std::to_string(i) + ".mat", est.blocks()[i]);
  std::ofstream out(prefix + ".diag");
  if (!out) throw IoError("cannot open for writing: " + prefix + ".diag");
  out << std::setprecision(17);
  const auto& config = est.config();
  const auto& diag = est.diagnostics();
  out << "t0=" << config.t0 << "\n";
  out << "h=" << config.h << "\n";
  out << "degree=" << config.degree << "\n";
  out << "epsilon=" << config.epsilon << "\n";
  out << "rho=" << diag.rho << "\n";
  out << "iterations=" << diag.iterations << "\n";
  out << "converged=" << (diag.converged ? 1 : 0) << "\n";
  out << "primal_residual_sq=" << diag.primal_residual_sq << "\n";
  out << "dual_residual=" << diag.dual_residual << "\n";
  out << "objective=" << diag.objective << "\n";
  out << "entry_bound_violated=" << (diag.entry_bound_violated ? 1 : 0) << "\n";
}

}  // namespace lrmf
