#pragma once

// Test-only reference solvers. Everything here recomputes results through an
// independent route (dense algebra, grid search, subgradient descent) and must
// not call into the solver paths it is used to check.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lrmf/local_fit.hpp"
#include "lrmf/sampling.hpp"

namespace oracles {

/// Objective of the eigenvalue-shrinkage problem on a real symmetric 2x2
/// matrix [[a, b], [b, c]]: t*||X||_1 + 0.5*||X - target||_F^2.
inline double prox_objective_2x2(double a, double b, double c,
                                 const Eigen::Matrix2d& target, double t) {
  const double tr = a + c;
  const double disc = std::sqrt((a - c) * (a - c) / 4.0 + b * b);
  const double l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
  const double nuclear = std::abs(l1) + std::abs(l2);
  const double da = a - target(0, 0), db = b - target(0, 1), dc = c - target(1, 1);
  return t * nuclear + 0.5 * (da * da + 2.0 * db * db + dc * dc);
}

/// Coarse-to-fine grid minimization of prox_objective_2x2 over (a, b, c).
inline double prox_grid_min_2x2(const Eigen::Matrix2d& target, double t,
                                int passes = 4, int steps = 24) {
  const double scale = target.cwiseAbs().maxCoeff() + t + 1.0;
  double ca = 0.0, cb = 0.0, cc = 0.0, radius = scale;
  double best = prox_objective_2x2(ca, cb, cc, target, t);
  for (int pass = 0; pass < passes; ++pass) {
    double ba = ca, bb = cb, bc = cc;
    for (int ia = -steps; ia <= steps; ++ia)
      for (int ib = -steps; ib <= steps; ++ib)
        for (int ic = -steps; ic <= steps; ++ic) {
          const double a = ca + radius * ia / steps;
          const double b = cb + radius * ib / steps;
          const double c = cc + radius * ic / steps;
          const double value = prox_objective_2x2(a, b, c, target, t);
          if (value < best) {
            best = value;
            ba = a;
            bb = b;
            bc = c;
          }
        }
    ca = ba;
    cb = bb;
    cc = bc;
    radius = radius * 2.5 / steps;
  }
  return best;
}

/// Projected-subgradient descent on the penalized windowed objective over
/// block-diagonal Hermitian matrices, tracking the best value seen. The step
/// uses the current gap to the running best (a diminishing-target rule).
inline double subgradient_best_objective(const lrmf::Dataset& data,
                                         const lrmf::LocalFitConfig& config,
                                         long iterations) {
  using lrmf::CMatrix;
  const int m = data.m();
  const int blocks = config.degree + 1;
  const double inv_nh = 1.0 / (static_cast<double>(data.size()) * config.h);

  struct Touched {
    double u, w, y;
    lrmf::BasisIndex x;
  };
  std::vector<Touched> window;
  for (const auto& o : data.observations()) {
    const double u = (o.tau - config.t0) / config.h;
    if (std::abs(u) > 1.0) continue;
    window.push_back({u, config.basis.weight(u), o.y, o.x});
  }

  std::vector<CMatrix> s(blocks, CMatrix::Zero(m, m));
  auto objective = [&](const std::vector<CMatrix>& state) {
    double data_term = 0.0;
    for (const auto& obs : window) {
      double fitted = 0.0;
      for (int i = 0; i < blocks; ++i)
        fitted += config.basis.eval(i, obs.u) *
                  lrmf::inner_with_basis(lrmf::hermitian_unchecked(state[i]), obs.x);
      const double residual = obs.y - fitted;
      data_term += obs.w * residual * residual;
    }
    double nuclear = 0.0;
    for (const auto& block : state) {
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(block, Eigen::EigenvaluesOnly);
      nuclear += solver.eigenvalues().cwiseAbs().sum();
    }
    return inv_nh * data_term + config.epsilon * nuclear;
  };

  double best = objective(s);
  std::vector<CMatrix> best_state = s;
  for (long k = 1; k <= iterations; ++k) {
    // subgradient: data part is exact, nuclear part via the eigenvalue signs
    std::vector<CMatrix> grad(blocks, CMatrix::Zero(m, m));
    for (const auto& obs : window) {
      double fitted = 0.0;
      for (int i = 0; i < blocks; ++i)
        fitted += config.basis.eval(i, obs.u) *
                  lrmf::inner_with_basis(lrmf::hermitian_unchecked(s[i]), obs.x);
      const double factor = -2.0 * inv_nh * obs.w * (obs.y - fitted);
      const lrmf::Hermitian e = lrmf::basis_element(obs.x, m);
      for (int i = 0; i < blocks; ++i)
        grad[i] += factor * config.basis.eval(i, obs.u) * e.mat();
    }
    for (int i = 0; i < blocks; ++i) {
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(s[i]);
      Eigen::VectorXd signs = solver.eigenvalues();
      for (Eigen::Index q = 0; q < signs.size(); ++q)
        signs(q) = signs(q) > 0 ? 1.0 : (signs(q) < 0 ? -1.0 : 0.0);
      grad[i] += config.epsilon * solver.eigenvectors() * signs.asDiagonal() *
                 solver.eigenvectors().adjoint();
    }
    double grad_sq = 0.0;
    for (const auto& g : grad) grad_sq += g.squaredNorm();
    if (grad_sq < 1e-30) break;
    const double current = objective(s);
    const double target_gap = (current - best) + 1.0 / (10.0 + k);
    const double step = target_gap / grad_sq;
    for (int i = 0; i < blocks; ++i) {
      s[i] -= step * grad[i];
      s[i] = 0.5 * (s[i] + s[i].adjoint().eval());
    }
    const double value = objective(s);
    if (value < best) {
      best = value;
      best_state = s;
    }
  }
  return best;
}

/// Exact weighted least-squares value of one coordinate stack: solves the
/// (degree+1)-dimensional normal equations assembled densely from the raw
/// observations (no penalty).
inline Eigen::VectorXd dense_wls_coordinate(const lrmf::Dataset& data,
                                            const lrmf::LocalFitConfig& config,
                                            const lrmf::BasisIndex& idx) {
  const int blocks = config.degree + 1;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(blocks, blocks);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(blocks);
  for (const auto& o : data.observations()) {
    if (!(o.x == idx)) continue;
    const double u = (o.tau - config.t0) / config.h;
    if (std::abs(u) > 1.0) continue;
    const double w = config.basis.weight(u);
    Eigen::VectorXd p(blocks);
    for (int i = 0; i < blocks; ++i) p(i) = config.basis.eval(i, u);
    normal += w * p * p.transpose();
    rhs += w * o.y * p;
  }
  return normal.ldlt().solve(rhs);
}

}  // namespace oracles
