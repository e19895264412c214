#include "lrmf/truth.hpp"

#include <cmath>
#include <sstream>

#include "lrmf/rng.hpp"

namespace lrmf {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr int kScanGrid = 2048;

double poly_eval(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<double> poly_deriv(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {0.0};
  std::vector<double> out(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) out[i - 1] = coeffs[i] * static_cast<double>(i);
  return out;
}

double rough_profile(const std::vector<double>& centers,
                     const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < centers.size(); ++k)
    acc += coeffs[k] * std::pow(std::abs(t - centers[k]), 1.5);
  return acc;
}

double rough_profile_deriv(const std::vector<double>& centers,
                           const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double d = t - centers[k];
    acc += coeffs[k] * 1.5 * std::copysign(std::sqrt(std::abs(d)), d);
  }
  return acc;
}

/// Largest |<M, X>| over the basis for a real symmetric matrix M.
double amplitude_of(const Eigen::MatrixXd& m) {
  double amp = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    amp = std::max(amp, std::abs(m(i, i)));
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      amp = std::max(amp, kSqrt2 * std::abs(m(i, j)));
  }
  return amp;
}

int real_numerical_rank(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > 1e-12 * top) ++rank;
  return rank;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> knot_values)
    : values_(std::move(knot_values)) {
  const int n = static_cast<int>(values_.size());
  if (n < 2) throw InvalidArgument("CubicSpline needs at least two knots");
  segments_ = n - 1;
  dt_ = 1.0 / segments_;
  curvature_.assign(n, 0.0);
  if (n > 2) {
    // Natural spline: tridiagonal system for the interior knot curvatures.
    const int interior = n - 2;
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(interior, interior);
    Eigen::VectorXd rhs(interior);
    for (int i = 0; i < interior; ++i) {
      lhs(i, i) = 4.0;
      if (i > 0) lhs(i, i - 1) = 1.0;
      if (i + 1 < interior) lhs(i, i + 1) = 1.0;
      rhs(i) = 6.0 / (dt_ * dt_) *
               (values_[i + 2] - 2.0 * values_[i + 1] + values_[i]);
    }
    const Eigen::VectorXd solution = lhs.ldlt().solve(rhs);
    for (int i = 0; i < interior; ++i) curvature_[i + 1] = solution(i);
  }
}

double CubicSpline::value(double t) const {
  const int seg = std::min(segments_ - 1, std::max(0, static_cast<int>(t / dt_)));
  const double s = t - seg * dt_;
  const double y0 = values_[seg], y1 = values_[seg + 1];
  const double m0 = curvature_[seg], m1 = curvature_[seg + 1];
  const double b = (y1 - y0) / dt_ - dt_ * (2.0 * m0 + m1) / 6.0;
  const double c = m0 / 2.0;
  const double d = (m1 - m0) / (6.0 * dt_);
  return y0 + s * (b + s * (c + s * d));
}

double CubicSpline::deriv(double t) const {
  const int seg = std::min(segments_ - 1, std::max(0, static_cast<int>(t / dt_)));
  const double s = t - seg * dt_;
  const double y0 = values_[seg], y1 = values_[seg + 1];
  const double m0 = curvature_[seg], m1 = curvature_[seg + 1];
  const double b = (y1 - y0) / dt_ - dt_ * (2.0 * m0 + m1) / 6.0;
  const double c = m0 / 2.0;
  const double d = (m1 - m0) / (6.0 * dt_);
  return b + s * (2.0 * c + 3.0 * s * d);
}

double CubicSpline::second(double t) const {
  const int seg = std::min(segments_ - 1, std::max(0, static_cast<int>(t / dt_)));
  const double s = t - seg * dt_;
  const double m0 = curvature_[seg], m1 = curvature_[seg + 1];
  return m0 + (m1 - m0) * s / dt_;
}

void CubicSpline::scale(double s) {
  for (auto& v : values_) v *= s;
  for (auto& c : curvature_) c *= s;
}

double MatrixFunctionSpec_profile(const std::vector<double>& f_coeffs,
                                  const std::vector<double>& centers,
                                  const std::vector<double>& coeffs, double t) {
  double value = f_coeffs.empty() ? 0.0 : poly_eval(f_coeffs, t);
  if (!centers.empty()) value += rough_profile(centers, coeffs, t);
  return value;
}

Eigen::MatrixXd MatrixFunctionSpec::factor_value(double t) const {
  if (variant_ != TruthVariant::FactorModel)
    throw InvalidArgument("factor_value: not a factor model");
  Eigen::MatrixXd p(m_, cols_);
  for (int i = 0; i < m_; ++i)
    for (int c = 0; c < cols_; ++c) p(i, c) = curves_[i * cols_ + c].value(t);
  return p;
}

Eigen::MatrixXd MatrixFunctionSpec::dense_real(double t) const {
  switch (variant_) {
    case TruthVariant::Constant:
      return a0_.mat().real();
    case TruthVariant::Diffusion:
      return MatrixFunctionSpec_profile(f_coeffs_, kink_centers_, kink_coeffs_, t) *
             a0_.mat().real();
    case TruthVariant::FactorModel: {
      const Eigen::MatrixXd p = factor_value(t);
      return p * p.transpose();
    }
    case TruthVariant::EuclideanDistance: {
      Eigen::MatrixXd pts(m_, cols_);
      for (int i = 0; i < m_; ++i)
        for (int c = 0; c < cols_; ++c) pts(i, c) = curves_[i * cols_ + c].value(t);
      Eigen::MatrixXd out(m_, m_);
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
          out(i, j) = (pts.row(i) - pts.row(j)).squaredNorm();
      return out;
    }
  }
  return Eigen::MatrixXd::Zero(m_, m_);
}

Eigen::MatrixXd MatrixFunctionSpec::dense_real_deriv(double t, int order) const {
  if (order == 0) return dense_real(t);
  switch (variant_) {
    case TruthVariant::Constant:
      return Eigen::MatrixXd::Zero(m_, m_);
    case TruthVariant::Diffusion: {
      std::vector<double> c = f_coeffs_;
      for (int k = 0; k < order; ++k) c = poly_deriv(c);
      return poly_eval(c, t) * a0_.mat().real();
    }
    case TruthVariant::FactorModel: {
      Eigen::MatrixXd p(m_, cols_), dp(m_, cols_), d2p(m_, cols_);
      for (int i = 0; i < m_; ++i)
        for (int c = 0; c < cols_; ++c) {
          const auto& s = curves_[i * cols_ + c];
          p(i, c) = s.value(t);
          dp(i, c) = s.deriv(t);
          d2p(i, c) = s.second(t);
        }
      if (order == 1) {
        Eigen::MatrixXd g = dp * p.transpose();
        return g + g.transpose();
      }
      Eigen::MatrixXd g = d2p * p.transpose();
      return g + g.transpose() + 2.0 * dp * dp.transpose();
    }
    case TruthVariant::EuclideanDistance: {
      Eigen::MatrixXd p(m_, cols_), dp(m_, cols_), d2p(m_, cols_);
      for (int i = 0; i < m_; ++i)
        for (int c = 0; c < cols_; ++c) {
          const auto& s = curves_[i * cols_ + c];
          p(i, c) = s.value(t);
          dp(i, c) = s.deriv(t);
          d2p(i, c) = s.second(t);
        }
      Eigen::MatrixXd out(m_, m_);
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) {
          const Eigen::VectorXd diff = (p.row(i) - p.row(j)).transpose();
          const Eigen::VectorXd ddiff = (dp.row(i) - dp.row(j)).transpose();
          const Eigen::VectorXd d2diff = (d2p.row(i) - d2p.row(j)).transpose();
          if (order == 1) out(i, j) = 2.0 * diff.dot(ddiff);
          else out(i, j) = 2.0 * ddiff.squaredNorm() + 2.0 * diff.dot(d2diff);
        }
      return out;
    }
  }
  return Eigen::MatrixXd::Zero(m_, m_);
}

void MatrixFunctionSpec::finalize(double a1, double holder_l) {
  // One multiplicative knob: A, A' and A'' all scale together, so a single
  // factor can satisfy the amplitude bounds and the smoothness budget at once.
  double amp0 = 0.0, amp1 = 0.0, curv = 0.0;
  const int derivs = std::max(0, static_cast<int>(std::floor(beta_)));
  for (int g = 0; g <= kScanGrid; ++g) {
    const double t = static_cast<double>(g) / kScanGrid;
    amp0 = std::max(amp0, amplitude_of(dense_real(t)));
    if (derivs >= 1) amp1 = std::max(amp1, amplitude_of(dense_real_deriv(t, 1)));
    curv = std::max(curv, dense_real_deriv(t, 2).cwiseAbs().maxCoeff());
  }
  double scale = 1.0;
  if (amp0 > 0.0) scale = std::min(scale, a1 / amp0);
  if (amp1 > 0.0) scale = std::min(scale, a1 / amp1);
  if (curv > 0.0) scale = std::min(scale, holder_l / curv);

  if (variant_ == TruthVariant::FactorModel ||
      variant_ == TruthVariant::EuclideanDistance) {
    // Entries are quadratic in the curves; scale each curve by sqrt(scale).
    const double curve_scale = std::sqrt(scale);
    for (auto& c : curves_) c.scale(curve_scale);
  } else if (variant_ == TruthVariant::Diffusion) {
    a0_ = hermitian_unchecked(scale * a0_.mat());
  }

  realized_amplitude_ = 0.0;
  derivative_ranks_.assign(derivs + 1, 0);
  for (int g = 0; g <= kScanGrid; ++g) {
    const double t = static_cast<double>(g) / kScanGrid;
    realized_amplitude_ = std::max(realized_amplitude_, amplitude_of(dense_real(t)));
  }
  const int rank_grid = 32;
  for (int g = 0; g <= rank_grid; ++g) {
    const double t = static_cast<double>(g) / rank_grid;
    for (int k = 0; k <= derivs; ++k)
      derivative_ranks_[k] =
          std::max(derivative_ranks_[k], real_numerical_rank(dense_real_deriv(t, k)));
  }
}

MatrixFunctionSpec MatrixFunctionSpec::constant(const Hermitian& a0) {
  MatrixFunctionSpec spec;
  spec.variant_ = TruthVariant::Constant;
  spec.m_ = static_cast<int>(a0.dim());
  spec.a0_ = a0;
  spec.rank_bound_ = numerical_rank(a0);
  spec.beta_ = 1.5;
  spec.holder_l_ = 1.0;
  double amp = 0.0;
  // Complex constant matrices carry imaginary coordinates too.
  for (int c = 0; c < BasisIndex::count(spec.m_); ++c)
    amp = std::max(amp, std::abs(inner_with_basis(a0, BasisIndex::from_ordinal(spec.m_, c))));
  spec.a1_ = amp;
  spec.realized_amplitude_ = amp;
  spec.derivative_ranks_ = {spec.rank_bound_, 0};
  spec.label_ = "constant(m=" + std::to_string(spec.m_) + ")";
  return spec;
}

MatrixFunctionSpec MatrixFunctionSpec::factor_model(int m, int r, double beta,
                                                    double holder_l, double a1,
                                                    std::uint64_t seed, int knots) {
  if (m < 1 || r < 1 || r > m) throw InvalidArgument("factor_model: need 1 <= r <= m");
  if (knots < 4) throw InvalidArgument("factor_model: need at least 4 knots");
  if (!(beta > 0.0) || !(holder_l > 0.0) || !(a1 > 0.0))
    throw InvalidArgument("factor_model: beta, L, a1 must be positive");
  MatrixFunctionSpec spec;
  spec.variant_ = TruthVariant::FactorModel;
  spec.m_ = m;
  spec.cols_ = r;
  spec.rank_bound_ = r;
  spec.beta_ = beta;
  spec.holder_l_ = holder_l;
  spec.a1_ = a1;
  Rng rng(seed);
  spec.curves_.reserve(static_cast<std::size_t>(m) * r);
  for (int i = 0; i < m * r; ++i) {
    std::vector<double> values(knots);
    for (auto& v : values) v = rng.symmetric(1.0);
    spec.curves_.emplace_back(std::move(values));
  }
  spec.finalize(a1, holder_l);
  std::ostringstream label;
  label << "factor_model(m=" << m << ",r=" << r << ",beta=" << beta
        << ",L=" << holder_l << ",a1=" << a1 << ",seed=" << seed
        << ",knots=" << knots << ",deriv_ranks=";
  for (std::size_t k = 0; k < spec.derivative_ranks_.size(); ++k)
    label << (k ? "/" : "") << spec.derivative_ranks_[k];
  label << ")";
  spec.label_ = label.str();
  return spec;
}

MatrixFunctionSpec MatrixFunctionSpec::diffusion(const Hermitian& a0,
                                                 std::vector<double> f_coeffs,
                                                 double beta, double holder_l,
                                                 double a1) {
  if (f_coeffs.empty()) throw InvalidArgument("diffusion: empty coefficient list");
  if (a0.mat().imag().cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("diffusion: base matrix must be real symmetric");
  MatrixFunctionSpec spec;
  spec.variant_ = TruthVariant::Diffusion;
  spec.m_ = static_cast<int>(a0.dim());
  spec.a0_ = a0;
  spec.f_coeffs_ = std::move(f_coeffs);
  spec.rank_bound_ = numerical_rank(a0);
  spec.beta_ = beta;
  spec.holder_l_ = holder_l;
  spec.a1_ = a1;
  spec.finalize(a1, holder_l);
  spec.label_ = "diffusion(m=" + std::to_string(spec.m_) +
                ",rank=" + std::to_string(spec.rank_bound_) + ")";
  return spec;
}

MatrixFunctionSpec MatrixFunctionSpec::diffusion_rough(
    const Hermitian& a0, std::vector<double> kink_centers,
    std::vector<double> kink_coeffs, std::vector<double> poly_coeffs,
    double holder_l, double a1) {
  if (kink_centers.empty() || kink_centers.size() != kink_coeffs.size())
    throw InvalidArgument("diffusion_rough: kink lists must match and be nonempty");
  if (a0.mat().imag().cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("diffusion_rough: base matrix must be real symmetric");
  MatrixFunctionSpec spec;
  spec.variant_ = TruthVariant::Diffusion;
  spec.m_ = static_cast<int>(a0.dim());
  spec.a0_ = a0;
  spec.kink_centers_ = std::move(kink_centers);
  spec.kink_coeffs_ = std::move(kink_coeffs);
  spec.f_coeffs_ = std::move(poly_coeffs);
  spec.rank_bound_ = numerical_rank(a0);
  spec.beta_ = 1.5;
  spec.holder_l_ = holder_l;
  spec.a1_ = a1;

  // One scalar knob on the base matrix. The profile derivative is 1/2-Hoelder
  // with seminorm at most 1.5 * sum |c_k|, so the entrywise smoothness budget
  // is max|A0_ij| times that; the amplitude budget uses the grid supremum of
  // f. The kernel-estimator theory needs only the amplitude and smoothness
  // conditions, so the derivative amplitude is left unconstrained here.
  double f_sup = 0.0, poly_curv = 0.0;
  const std::vector<double> dpoly = poly_deriv(spec.f_coeffs_);
  const std::vector<double> d2poly = poly_deriv(dpoly);
  for (int g = 0; g <= kScanGrid; ++g) {
    const double t = static_cast<double>(g) / kScanGrid;
    f_sup = std::max(f_sup,
                     std::abs(MatrixFunctionSpec_profile(
                         spec.f_coeffs_, spec.kink_centers_, spec.kink_coeffs_, t)));
    if (!spec.f_coeffs_.empty())
      poly_curv = std::max(poly_curv, std::abs(poly_eval(d2poly, t)));
  }
  double coeff_abs_sum = 0.0;
  for (const double c : spec.kink_coeffs_) coeff_abs_sum += std::abs(c);
  // kink seminorm plus the smooth part's Lipschitz-to-Hoelder bound
  const double holder_seminorm = 1.5 * coeff_abs_sum + poly_curv;
  const double inner_sup = amplitude_of(a0.mat().real());
  const double entry_sup = a0.mat().real().cwiseAbs().maxCoeff();
  double scale = 1.0;
  if (inner_sup * f_sup > 0.0) scale = std::min(scale, a1 / (inner_sup * f_sup));
  if (entry_sup * holder_seminorm > 0.0)
    scale = std::min(scale, holder_l / (entry_sup * holder_seminorm));
  spec.a0_ = hermitian_unchecked(scale * a0.mat());

  spec.realized_amplitude_ = amplitude_of(spec.a0_.mat().real()) * f_sup;
  spec.derivative_ranks_ = {spec.rank_bound_, spec.rank_bound_};
  spec.label_ = "diffusion_rough(m=" + std::to_string(spec.m_) +
                ",rank=" + std::to_string(spec.rank_bound_) +
                ",kinks=" + std::to_string(spec.kink_centers_.size()) + ")";
  return spec;
}

MatrixFunctionSpec MatrixFunctionSpec::euclidean_distance(int m, int d,
                                                          double beta,
                                                          double holder_l,
                                                          double a1,
                                                          std::uint64_t seed,
                                                          int knots) {
  if (m < 2 || d < 1) throw InvalidArgument("euclidean_distance: need m >= 2, d >= 1");
  if (knots < 4) throw InvalidArgument("euclidean_distance: need at least 4 knots");
  MatrixFunctionSpec spec;
  spec.variant_ = TruthVariant::EuclideanDistance;
  spec.m_ = m;
  spec.cols_ = d;
  spec.rank_bound_ = d + 2;
  spec.beta_ = beta;
  spec.holder_l_ = holder_l;
  spec.a1_ = a1;
  Rng rng(seed);
  spec.curves_.reserve(static_cast<std::size_t>(m) * d);
  for (int i = 0; i < m * d; ++i) {
    std::vector<double> values(knots);
    for (auto& v : values) v = rng.symmetric(1.0);
    spec.curves_.emplace_back(std::move(values));
  }
  spec.finalize(a1, holder_l);
  std::ostringstream label;
  label << "euclidean_distance(m=" << m << ",d=" << d << ",seed=" << seed
        << ",deriv_ranks=";
  for (std::size_t k = 0; k < spec.derivative_ranks_.size(); ++k)
    label << (k ? "/" : "") << spec.derivative_ranks_[k];
  label << ")";
  spec.label_ = label.str();
  return spec;
}

Hermitian MatrixFunctionSpec::value(double t) const {
  if (t < 0.0 || t > 1.0) throw InvalidArgument("evaluate_truth: t outside [0,1]");
  if (variant_ == TruthVariant::Constant) return a0_;
  if (variant_ == TruthVariant::Diffusion)
    return hermitian_unchecked(
        MatrixFunctionSpec_profile(f_coeffs_, kink_centers_, kink_coeffs_, t) *
        a0_.mat());
  return hermitian_unchecked(dense_real(t).cast<Complex>());
}

double MatrixFunctionSpec::coordinate(double t, const BasisIndex& idx) const {
  if (t < 0.0 || t > 1.0) throw InvalidArgument("coordinate: t outside [0,1]");
  idx.validate(m_);
  const int k = idx.k - 1, j = idx.j - 1;
  switch (variant_) {
    case TruthVariant::Constant:
      return inner_with_basis(a0_, idx);
    case TruthVariant::Diffusion:
      return MatrixFunctionSpec_profile(f_coeffs_, kink_centers_, kink_coeffs_, t) *
             inner_with_basis(a0_, idx);
    case TruthVariant::FactorModel: {
      if (idx.kind == BasisKind::ImagAntisym) return 0.0;
      double entry = 0.0;
      for (int c = 0; c < cols_; ++c)
        entry += curves_[k * cols_ + c].value(t) * curves_[j * cols_ + c].value(t);
      return idx.kind == BasisKind::Diagonal ? entry : kSqrt2 * entry;
    }
    case TruthVariant::EuclideanDistance: {
      if (idx.kind == BasisKind::ImagAntisym) return 0.0;
      if (idx.kind == BasisKind::Diagonal) return 0.0;
      double entry = 0.0;
      for (int c = 0; c < cols_; ++c) {
        const double diff =
            curves_[k * cols_ + c].value(t) - curves_[j * cols_ + c].value(t);
        entry += diff * diff;
      }
      return kSqrt2 * entry;
    }
  }
  return 0.0;
}

std::string MatrixFunctionSpec::describe() const { return label_; }

Hermitian evaluate_truth(const MatrixFunctionSpec& spec, double t) {
  return spec.value(t);
}

Dataset generate_dataset(const MatrixFunctionSpec& spec, std::size_t n,
                         double noise_level, std::uint64_t seed,
                         NoiseKind noise) {
  if (n == 0) throw InvalidArgument("generate_dataset: n must be positive");
  if (noise_level < 0.0) throw InvalidArgument("generate_dataset: negative noise level");
  Rng rng(seed);
  const int m = spec.m();
  std::vector<Observation> obs;
  obs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Observation o;
    o.tau = rng.uniform01();
    o.x = BasisIndex::from_ordinal(m, static_cast<int>(rng.integer(BasisIndex::count(m))));
    double xi = 0.0;
    if (noise_level > 0.0)
      xi = (noise == NoiseKind::Uniform)
               ? rng.symmetric(noise_level)
               : noise_level * rng.rademacher();
    o.y = spec.coordinate(o.tau, o.x) + xi;
    obs.push_back(o);
  }
  // Small cushion over the grid-scanned amplitude so the recorded bound is a
  // true bound between grid points as well.
  const double a = spec.realized_amplitude() * 1.001 + noise_level + 1e-15;
  return Dataset(std::move(obs), m, a, seed, spec.describe());
}

}  // namespace lrmf
