#include "lrmf/selection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "lrmf/parallel.hpp"
#include "lrmf/rng.hpp"

namespace lrmf {

double grid_d(double h, double h_max) {
  return std::sqrt(std::max(1.0, 2.0 * std::log(h_max / h)));
}

double grid_alpha(double h, double h_max) {
  return 1.0 / std::sqrt(grid_d(h, h_max));
}

LepskiiGrid lepskii_grid(double h_max, double h_min) {
  if (!(h_min > 0.0) || h_min > h_max || h_max > 1.0)
    throw InvalidArgument("lepskii_grid: need 0 < h_min <= h_max <= 1");
  LepskiiGrid grid;
  grid.h_max = h_max;
  grid.h_min = h_min;
  double h = h_max;
  grid.values.push_back(h);
  for (;;) {
    const double next = h / (1.0 + grid_alpha(h, h_max));
    if (next < h_min) break;
    grid.values.push_back(next);
    h = next;
  }
  return grid;
}

std::pair<double, double> default_h_range(
    int m, int r, std::size_t n,
    std::optional<std::pair<double, double>> beta_range,
    std::optional<std::pair<double, double>> holder_range, double a, double phi,
    double r_t, double c1) {
  if (!beta_range || !holder_range) {
    if (n < 1) throw InvalidArgument("default_h_range: n must be positive");
    return {1.0 / std::sqrt(static_cast<double>(n)), 1.0};
  }
  const auto [beta_lo, beta_hi] = *beta_range;
  const auto [l_lo, l_hi] = *holder_range;
  if (beta_lo > beta_hi || l_lo > l_hi)
    throw InvalidArgument("default_h_range: inverted range");
  const auto formula = [&](double beta, int degree, double holder_l) {
    double factorial = 1.0;
    for (int i = 2; i <= degree; ++i) factorial *= i;
    const double l3 = std::pow(std::max(degree, 1), 3);
    const double numerator = l3 * std::pow(factorial * phi * r_t * a, 2.0) * m *
                             r * std::log(static_cast<double>(n));
    return c1 * std::pow(numerator / (holder_l * holder_l * n),
                         1.0 / (2.0 * beta + 1.0));
  };
  double h_max = formula(beta_hi, static_cast<int>(std::floor(beta_hi)), l_lo);
  double h_min = formula(beta_lo, static_cast<int>(std::floor(beta_lo)), l_hi);
  h_max = std::min(h_max, 1.0);
  h_min = std::min(h_min, 1.0);
  if (!(h_min > 0.0) || h_min > h_max)
    throw InvalidArgument("default_h_range: produced an empty range");
  return {h_min, h_max};
}

std::vector<int> degree_candidates(double beta_lo, double beta_hi) {
  if (beta_lo > beta_hi) throw InvalidArgument("degree_candidates: inverted range");
  std::vector<int> out;
  for (int l = static_cast<int>(std::floor(beta_lo));
       l <= static_cast<int>(std::floor(beta_hi)); ++l)
    out.push_back(l);
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          std::uint64_t seed) {
  const std::size_t total = data.size();
  if (total % 2 != 0)
    throw InvalidArgument("split_dataset: need an even sample count");
  std::vector<std::uint32_t> order(total);
  for (std::uint32_t i = 0; i < total; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = total - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.integer(i + 1));
    std::swap(order[i], order[j]);
  }
  const std::size_t half = total / 2;
  std::vector<Observation> train_obs, test_obs;
  train_obs.reserve(half);
  test_obs.reserve(half);
  for (std::size_t i = 0; i < half; ++i)
    train_obs.push_back(data.observations()[order[i]]);
  for (std::size_t i = half; i < total; ++i)
    test_obs.push_back(data.observations()[order[i]]);
  Dataset train(std::move(train_obs), data.m(), data.a(), seed,
                data.description() + " [train]");
  Dataset test(std::move(test_obs), data.m(), data.a(), seed,
               data.description() + " [test]");
  return {std::move(train), std::move(test)};
}

double default_penalty(int k, int m, int r) {
  if (k < 1) throw InvalidArgument("default_penalty: k must be >= 1");
  return static_cast<double>(k) * m * r;
}

std::size_t argmin_criterion(const std::vector<double>& criteria) {
  if (criteria.empty()) throw InvalidArgument("argmin_criterion: empty list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < criteria.size(); ++i)
    if (criteria[i] < criteria[best]) best = i;
  return best;
}

SelectionReport select(
    const std::vector<std::pair<CandidateSpec, const GlobalEstimate*>>& fits,
    const Dataset& test) {
  if (fits.empty()) throw InvalidArgument("select: no candidates");
  if (test.size() == 0) throw InvalidArgument("select: empty test set");

  // Process in candidate-index order so ties resolve toward larger h
  // regardless of how the caller arranged the list.
  std::vector<std::size_t> order(fits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return fits[l].first.index < fits[r].first.index;
  });

  SelectionReport report;
  const double n_test = static_cast<double>(test.size());
  std::vector<double> criteria;
  criteria.reserve(fits.size());
  for (const std::size_t pos : order) {
    const auto& [spec, est] = fits[pos];
    CandidateResult result;
    result.spec = spec;
    result.fitted = true;
    double loss = 0.0;
    for (const auto& o : test.observations()) {
      const double fitted =
          o.tau > 0.0 ? global_coordinate(*est, o.tau, o.x) : 0.0;
      const double residual = o.y - fitted;
      loss += residual * residual;
    }
    result.test_loss = loss / n_test;
    result.criterion = result.test_loss + spec.penalty / n_test;
    criteria.push_back(result.criterion);
    report.candidates.push_back(std::move(result));
  }
  const std::size_t best = argmin_criterion(criteria);
  report.candidates[best].selected = true;
  report.selected_index = report.candidates[best].spec.index;
  report.selected = report.candidates[best].spec;
  return report;
}

SelectionReport run_selection_pipeline(const Dataset& data,
                                       const SelectionConfig& config,
                                       std::uint64_t split_seed) {
  const LepskiiGrid grid = lepskii_grid(config.h_max, config.h_min);
  const std::vector<int> degrees =
      degree_candidates(config.beta_lo, config.beta_hi);
  auto [train, test] = split_dataset(data, split_seed);

  // Enumerate candidates: larger h first, ties by smaller degree; the penalty
  // is assigned from this rank before any fitting happens.
  struct Candidate {
    CandidateSpec spec;
    GlobalEstimate fit;
    bool ok = false;
    std::string failure;
    int tiles = 0;
    long iterations = 0;
  };
  std::vector<Candidate> candidates;
  int index = 0;
  for (const double h : grid.values) {
    for (const int degree : degrees) {
      Candidate c;
      c.spec.index = ++index;
      c.spec.h = h;
      c.spec.degree = degree;
      const OrthoPolyBasis basis = OrthoPolyBasis::build(config.family, degree);
      c.spec.epsilon = penalty_epsilon(
          train.m(), train.size(), h, degree, train.a(), basis.phi(),
          monomial_transform(basis).r_t, config.penalty_d);
      c.spec.penalty = default_penalty(c.spec.index, train.m(), config.r);
      candidates.push_back(std::move(c));
    }
  }

  parallel_for(static_cast<int>(candidates.size()), [&](int i) {
    Candidate& c = candidates[i];
    try {
      c.fit = fit_global(train, c.spec.h, c.spec.degree, c.spec.epsilon,
                         config.family, config.admm);
      c.ok = true;
      c.tiles = static_cast<int>(c.fit.tiles().size());
      for (const auto& tile : c.fit.tiles())
        c.iterations += tile.diagnostics().iterations;
    } catch (const EmptyWindow& error) {
      c.failure = error.what();
    }
  });

  std::vector<std::pair<CandidateSpec, const GlobalEstimate*>> fitted;
  for (const auto& c : candidates)
    if (c.ok) fitted.push_back({c.spec, &c.fit});

  SelectionReport report;
  if (!fitted.empty()) report = select(fitted, test);

  // Merge fit diagnostics, risk and failures back in candidate order.
  std::vector<CandidateResult> merged;
  std::size_t cursor = 0;
  for (const auto& c : candidates) {
    CandidateResult result;
    if (c.ok) {
      result = report.candidates[cursor++];
      result.tiles = c.tiles;
      result.total_iterations = c.iterations;
      if (config.truth)
        result.integrated_risk =
            integrated_l2_risk(c.fit, *config.truth, config.risk_grid);
    } else {
      result.spec = c.spec;
      result.fitted = false;
      result.failure = c.failure;
    }
    merged.push_back(std::move(result));
  }
  report.candidates = std::move(merged);
  return report;
}

void save_selection_csv(const SelectionReport& report, const std::string& path,
                        bool include_risk) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << std::setprecision(17);
  if (include_risk) out << "h,ell,epsilon,integrated_risk,criterion,selected\n";
  else out << "h,ell,epsilon,criterion,selected\n";
  for (const auto& c : report.candidates) {
    out << c.spec.h << "," << c.spec.degree << "," << c.spec.epsilon << ",";
    if (include_risk) {
      if (c.integrated_risk >= 0.0) out << c.integrated_risk;
      out << ",";
    }
    if (c.fitted) out << c.criterion;
    out << "," << (c.selected ? 1 : 0) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace lrmf
