#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrmf/global_fit.hpp"

namespace lrmf {

/// Geometric bandwidth grid: h_0 = h_max, h_{k+1} = h_k / (1 + alpha(h_k))
/// with alpha(h) = 1/sqrt(d(h)) and d(h) = sqrt(max(1, 2 log(h_max/h))),
/// truncated at the first value below h_min.
struct LepskiiGrid {
  double h_max = 1.0;
  double h_min = 0.01;
  std::vector<double> values;
};

double grid_d(double h, double h_max);
double grid_alpha(double h, double h_max);
LepskiiGrid lepskii_grid(double h_max, double h_min);

/// Bandwidth search range from smoothness ranges [beta_lo, beta_hi] and
/// [l_lo, l_hi], clamped into (0, 1]. Without ranges: (n^{-1/2}, 1).
std::pair<double, double> default_h_range(
    int m, int r, std::size_t n,
    std::optional<std::pair<double, double>> beta_range,
    std::optional<std::pair<double, double>> holder_range, double a, double phi,
    double r_t, double c1);

/// Consecutive integers floor(beta_lo) .. floor(beta_hi). This is the full
/// candidate set; when the sample size is polynomial in the dimension the set
/// could be narrowed per bandwidth, but the narrowing stays an optional
/// caller-side filter here.
std::vector<int> degree_candidates(double beta_lo, double beta_hi);

/// Equal halves drawn without replacement; requires an even sample count.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          std::uint64_t seed);

/// Penalty pi_k = k*m*r for the k-th candidate (1-based).
double default_penalty(int k, int m, int r);

struct CandidateSpec {
  int index = 0;  // 1-based rank: larger h first, ties by smaller degree
  double h = 0.0;
  int degree = 0;
  double epsilon = 0.0;
  double penalty = 0.0;  // pi_k
};

struct CandidateResult {
  CandidateSpec spec;
  bool fitted = false;
  std::string failure;
  double test_loss = 0.0;
  double criterion = 0.0;
  double integrated_risk = -1.0;  // filled only when a truth is supplied
  int tiles = 0;
  long total_iterations = 0;
  bool selected = false;
};

struct SelectionReport {
  std::vector<CandidateResult> candidates;
  int selected_index = -1;  // candidate index k*, -1 when nothing fit
  CandidateSpec selected;
};

/// Position of the smallest value; ties resolved toward the smaller position.
std::size_t argmin_criterion(const std::vector<double>& criteria);

/// Criterion_k = mean squared test residual + pi_k / n_test over the fitted
/// candidates; k* attains the minimum (smallest candidate index on ties).
SelectionReport select(
    const std::vector<std::pair<CandidateSpec, const GlobalEstimate*>>& fits,
    const Dataset& test);

struct SelectionConfig {
  double h_max = 1.0;
  double h_min = 0.01;
  double beta_lo = 1.5;
  double beta_hi = 1.5;
  int r = 1;                    // rank budget in the penalty
  double penalty_d = 1.0;       // scale of the per-candidate penalty level
  PolyFamily family = PolyFamily::LegendreBox;
  AdmmSettings admm;
  int risk_grid = 512;                          // for per-candidate risk
  const MatrixFunctionSpec* truth = nullptr;    // optional risk column
};

/// Full pipeline: grid construction, candidate enumeration, even split, one
/// global fit per candidate on the training half, penalized selection on the
/// test half. Candidates whose fit fails (a starved tile at small h) are
/// excluded but reported.
SelectionReport run_selection_pipeline(const Dataset& data,
                                       const SelectionConfig& config,
                                       std::uint64_t split_seed);

/// CSV rows `h,ell,epsilon[,integrated_risk],criterion,selected`.
void save_selection_csv(const SelectionReport& report, const std::string& path,
                        bool include_risk);

}  // namespace lrmf
