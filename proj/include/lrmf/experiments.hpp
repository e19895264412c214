#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lrmf/selection.hpp"

namespace lrmf {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSweepCsvHeader =
    "n,risk_mean,risk_std,upper_rate,lower_rate";
inline constexpr const char* kSelectionCsvHeader =
    "h,ell,epsilon,criterion,selected";
inline constexpr const char* kSelectionRiskCsvHeader =
    "h,ell,epsilon,integrated_risk,criterion,selected";

enum class ExperimentKind {
  PointwiseSweep,
  IntegratedSweep,
  SupnormSweep,
  ModelSelection,
  SingleFit,
};

/// Everything one run needs, parsed from a commented JSON file. Field names
/// mirror configs/example.json.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SingleFit;

  // truth
  std::string truth_variant = "factor_model";
  int m = 10;
  int r = 2;
  int d = 3;  // euclidean_distance point dimension
  double beta = 1.5;
  double holder_l = 24.0;
  double a1 = 1.0;
  std::uint64_t truth_seed = 7;
  int knots = 8;
  std::vector<double> f_coeffs = {0.0, 1.0};

  // data
  std::vector<std::size_t> n_list = {1000};
  double noise_level = 0.5;
  std::string noise_kind = "uniform";
  std::vector<std::uint64_t> seeds = {1};

  // fit
  std::string family = "legendre";
  int degree = 1;
  double t0 = 0.5;
  double c1 = 1.0;
  double penalty_d = 1.0;
  double c_star = 1.0;
  double rho_scale = 1.0;
  int max_iterations = 2000;
  double eps_tol = 1e-8;
  int grid_points = 512;
  double epsilon_override = -1.0;  // fixed penalty level when >= 0
  double h_override = -1.0;        // fixed bandwidth when > 0

  // selection
  double h_max = 1.0;
  double h_min = 0.01;
  double beta_lo = 1.5;
  double beta_hi = 1.5;

  // theoretical curves
  double upper_constant = 1.0;
  double lower_constant = 1.0;

  std::string out_dir = "out";
  bool plots = false;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  void validate() const;

  MatrixFunctionSpec build_truth() const;
  PolyFamily poly_family() const;
  NoiseKind noise() const;
};

struct SweepRow {
  std::size_t n = 0;
  double risk_mean = 0.0;
  double risk_std = 0.0;
  double upper_rate = 0.0;
  double lower_rate = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

/// Least squares of log(risk) on log(n); needs at least three positive rows.
std::pair<double, double> rate_slope(
    const std::vector<std::pair<double, double>>& n_risk);

/// Runs one sweep kind (pointwise, integrated or supnorm) in memory.
SweepReport run_sweep(const ExperimentConfig& config);

/// Runs the model-selection pipeline; n_list[0] is the total sample count
/// (the two halves get n_list[0]/2 each).
SelectionReport run_model_selection(const ExperimentConfig& config);

/// Single pointwise fit for the first n/seed, with its pointwise risk.
std::pair<BlockDiagEstimate, double> run_single_fit(const ExperimentConfig& config);

/// Orchestrates a full run: executes the configured kind, writes the CSVs,
/// the manifest and (optionally) plot files under out_dir.
void run_experiment(const ExperimentConfig& config);

void save_sweep_csv(const SweepReport& report, const std::string& path);

/// One matrix text file and one image per sample size, plus the truth matrix.
void emit_heatmap_series(
    const MatrixFunctionSpec& truth, double t0,
    const std::vector<std::pair<std::size_t, Hermitian>>& estimates,
    const std::string& out_dir);

/// Diverging-colormap PPM render of the real part of a Hermitian matrix.
void write_ppm_heatmap(const Hermitian& a, const std::string& path);

/// Log-log SVG chart of risk rows against the reference curves.
void write_sweep_svg(const SweepReport& report, const std::string& path);

void write_manifest(const ExperimentConfig& config, const std::string& path);

/// out_dir, with relative paths rooted at $LRMF_OUT_ROOT when that is set.
std::string resolve_out_dir(const ExperimentConfig& config);

}  // namespace lrmf
