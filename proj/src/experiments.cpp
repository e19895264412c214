#include "lrmf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lrmf/parallel.hpp"
#include "lrmf/rng.hpp"

namespace lrmf {

namespace {

using nlohmann::json;

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "pointwise_sweep") return ExperimentKind::PointwiseSweep;
  if (name == "integrated_sweep") return ExperimentKind::IntegratedSweep;
  if (name == "supnorm_sweep") return ExperimentKind::SupnormSweep;
  if (name == "model_selection") return ExperimentKind::ModelSelection;
  if (name == "single_fit") return ExperimentKind::SingleFit;
  throw ConfigError("unknown experiment kind: " + name);
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::PointwiseSweep: return "pointwise_sweep";
    case ExperimentKind::IntegratedSweep: return "integrated_sweep";
    case ExperimentKind::SupnormSweep: return "supnorm_sweep";
    case ExperimentKind::ModelSelection: return "model_selection";
    case ExperimentKind::SingleFit: return "single_fit";
  }
  return "?";
}

template <typename T>
void read_field(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double std_of(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace

std::string resolve_out_dir(const ExperimentConfig& config) {
  std::filesystem::path dir(config.out_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("LRMF_OUT_ROOT"))
      dir = std::filesystem::path(root) / dir;
  }
  return dir.string();
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& error) {
    throw ConfigError(std::string("config parse failure: ") + error.what());
  }
  ExperimentConfig config;
  try {
    if (j.contains("kind")) config.kind = kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("truth")) {
      const json& t = j.at("truth");
      read_field(t, "variant", config.truth_variant);
      read_field(t, "m", config.m);
      read_field(t, "r", config.r);
      read_field(t, "d", config.d);
      read_field(t, "beta", config.beta);
      read_field(t, "holder_l", config.holder_l);
      read_field(t, "a1", config.a1);
      read_field(t, "seed", config.truth_seed);
      read_field(t, "knots", config.knots);
      read_field(t, "f_coeffs", config.f_coeffs);
    }
    if (j.contains("data")) {
      const json& d = j.at("data");
      read_field(d, "n", config.n_list);
      read_field(d, "noise_level", config.noise_level);
      read_field(d, "noise_kind", config.noise_kind);
      read_field(d, "seeds", config.seeds);
    }
    if (j.contains("fit")) {
      const json& f = j.at("fit");
      read_field(f, "family", config.family);
      read_field(f, "degree", config.degree);
      read_field(f, "t0", config.t0);
      read_field(f, "c1", config.c1);
      read_field(f, "d", config.penalty_d);
      read_field(f, "c_star", config.c_star);
      read_field(f, "rho_scale", config.rho_scale);
      read_field(f, "max_iterations", config.max_iterations);
      read_field(f, "eps_tol", config.eps_tol);
      read_field(f, "grid_points", config.grid_points);
      read_field(f, "epsilon", config.epsilon_override);
      read_field(f, "h", config.h_override);
    }
    if (j.contains("selection")) {
      const json& s = j.at("selection");
      read_field(s, "h_max", config.h_max);
      read_field(s, "h_min", config.h_min);
      read_field(s, "beta_lo", config.beta_lo);
      read_field(s, "beta_hi", config.beta_hi);
    }
    if (j.contains("rates")) {
      const json& r = j.at("rates");
      read_field(r, "upper_constant", config.upper_constant);
      read_field(r, "lower_constant", config.lower_constant);
    }
    read_field(j, "out_dir", config.out_dir);
    read_field(j, "plots", config.plots);
  } catch (const json::exception& error) {
    throw ConfigError(std::string("config field failure: ") + error.what());
  }
  config.validate();
  return config;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["kind"] = kind_name(kind);
  j["truth"] = {{"variant", truth_variant}, {"m", m}, {"r", r}, {"d", d},
                {"beta", beta}, {"holder_l", holder_l}, {"a1", a1},
                {"seed", truth_seed}, {"knots", knots}, {"f_coeffs", f_coeffs}};
  j["data"] = {{"n", n_list}, {"noise_level", noise_level},
               {"noise_kind", noise_kind}, {"seeds", seeds}};
  j["fit"] = {{"family", family}, {"degree", degree}, {"t0", t0}, {"c1", c1},
              {"d", penalty_d}, {"c_star", c_star}, {"rho_scale", rho_scale},
              {"max_iterations", max_iterations}, {"eps_tol", eps_tol},
              {"grid_points", grid_points}, {"epsilon", epsilon_override},
              {"h", h_override}};
  j["selection"] = {{"h_max", h_max}, {"h_min", h_min}, {"beta_lo", beta_lo},
                    {"beta_hi", beta_hi}};
  j["rates"] = {{"upper_constant", upper_constant},
                {"lower_constant", lower_constant}};
  j["out_dir"] = out_dir;
  j["plots"] = plots;
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  if (m < 1 || r < 1) throw ConfigError("config: m and r must be positive");
  if (n_list.empty()) throw ConfigError("config: empty n list");
  for (const auto n : n_list)
    if (n < 2) throw ConfigError("config: every n must be at least 2");
  const bool sweep = kind == ExperimentKind::PointwiseSweep ||
                     kind == ExperimentKind::IntegratedSweep ||
                     kind == ExperimentKind::SupnormSweep;
  if (sweep)
    for (std::size_t i = 1; i < n_list.size(); ++i)
      if (n_list[i] <= n_list[i - 1])
        throw ConfigError("config: n list must be strictly increasing for sweeps");
  if (seeds.empty()) throw ConfigError("config: empty seed list");
  if (!(beta > 0.0) || !(holder_l > 0.0) || !(a1 > 0.0))
    throw ConfigError("config: beta, holder_l, a1 must be positive");
  if (noise_level < 0.0) throw ConfigError("config: negative noise level");
  if (noise_kind != "uniform" && noise_kind != "two_point")
    throw ConfigError("config: noise_kind must be uniform or two_point");
  if (family != "legendre" && family != "chebyshev_u")
    throw ConfigError("config: family must be legendre or chebyshev_u");
  if (degree < 0) throw ConfigError("config: degree must be >= 0");
  if (t0 < 0.0 || t0 > 1.0) throw ConfigError("config: t0 must be in [0,1]");
  if (!(c1 > 0.0) || !(penalty_d > 0.0) || !(c_star > 0.0))
    throw ConfigError("config: c1, d, c_star must be positive");
  if (grid_points < 64) throw ConfigError("config: grid_points must be >= 64");
  if (!(h_min > 0.0) || h_min > h_max || h_max > 1.0)
    throw ConfigError("config: need 0 < h_min <= h_max <= 1");
  if (beta_lo > beta_hi) throw ConfigError("config: beta_lo > beta_hi");
  if (truth_variant != "constant" && truth_variant != "factor_model" &&
      truth_variant != "diffusion" && truth_variant != "euclidean_distance")
    throw ConfigError("config: unknown truth variant " + truth_variant);
}

MatrixFunctionSpec ExperimentConfig::build_truth() const {
  if (truth_variant == "factor_model")
    return MatrixFunctionSpec::factor_model(m, r, beta, holder_l, a1,
                                            truth_seed, knots);
  if (truth_variant == "euclidean_distance")
    return MatrixFunctionSpec::euclidean_distance(m, d, beta, holder_l, a1,
                                                  truth_seed, knots);
  if (truth_variant == "diffusion") {
    // Deterministic rank-r symmetric base built from the truth seed.
    Rng rng(truth_seed);
    Eigen::MatrixXd basis_cols(m, r);
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < r; ++c) basis_cols(i, c) = rng.symmetric(1.0);
    const Eigen::MatrixXd base = basis_cols * basis_cols.transpose();
    return MatrixFunctionSpec::diffusion(Hermitian(base.cast<Complex>()),
                                         f_coeffs, beta, holder_l, a1);
  }
  // constant: rank-r projector-like matrix scaled to amplitude a1
  CMatrix a0 = CMatrix::Zero(m, m);
  for (int i = 0; i < std::min(m, r); ++i) a0(i, i) = a1;
  return MatrixFunctionSpec::constant(Hermitian(a0));
}

PolyFamily ExperimentConfig::poly_family() const {
  return family == "chebyshev_u" ? PolyFamily::ChebyshevU
                                 : PolyFamily::LegendreBox;
}

NoiseKind ExperimentConfig::noise() const {
  return noise_kind == "two_point" ? NoiseKind::TwoPoint : NoiseKind::Uniform;
}

std::pair<double, double> rate_slope(
    const std::vector<std::pair<double, double>>& n_risk) {
  if (n_risk.size() < 3)
    throw InvalidArgument("rate_slope: need at least three rows");
  for (const auto& [n, risk] : n_risk)
    if (!(n > 0.0) || !(risk > 0.0))
      throw InvalidArgument("rate_slope: rows must be positive");
  const double count = static_cast<double>(n_risk.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, risk] : n_risk) {
    sx += std::log(n);
    sy += std::log(risk);
  }
  const double mx = sx / count, my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, risk] : n_risk) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(risk) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("rate_slope: degenerate abscissae");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (const auto& [n, risk] : n_risk) {
    const double fit = my + slope * (std::log(n) - mx);
    const double residual = std::log(risk) - fit;
    rss += residual * residual;
  }
  const double stderr_slope =
      std::sqrt(rss / (count - 2.0) / sxx);
  return {slope, stderr_slope};
}

SweepReport run_sweep(const ExperimentConfig& config) {
  config.validate();
  const MatrixFunctionSpec truth = config.build_truth();
  const OrthoPolyBasis basis =
      OrthoPolyBasis::build(config.poly_family(), config.degree);
  const double phi = basis.phi();
  const double r_t = monomial_transform(basis).r_t;

  struct Job {
    std::size_t n;
    std::uint64_t seed;
    double risk = 0.0;
  };
  std::vector<Job> jobs;
  for (const auto n : config.n_list)
    for (const auto seed : config.seeds) jobs.push_back({n, seed});

  parallel_for(static_cast<int>(jobs.size()), [&](int i) {
    Job& job = jobs[i];
    const Dataset data = generate_dataset(truth, job.n, config.noise_level,
                                          job.seed, config.noise());
    if (config.kind == ExperimentKind::SupnormSweep) {
      const double kernel_h =
          config.h_override > 0.0
              ? config.h_override
              : kernel_bandwidth(config.m, job.n, config.degree, config.beta,
                                 config.holder_l, data.a(), config.c_star);
      KernelEstimateConfig kc{HigherOrderKernel::build(config.degree), kernel_h,
                              config.grid_points};
      job.risk = kernel_sup_risk(data, truth, kc);
      return;
    }
    const double h =
        config.h_override > 0.0
            ? config.h_override
            : optimal_bandwidth(config.m, config.r, job.n, config.degree,
                                config.beta, config.holder_l, data.a(), phi,
                                r_t, config.c1);
    const double epsilon =
        config.epsilon_override >= 0.0
            ? config.epsilon_override
            : penalty_epsilon(config.m, job.n, h, config.degree, data.a(), phi,
                              r_t, config.penalty_d);
    if (config.kind == ExperimentKind::IntegratedSweep) {
      AdmmSettings admm{config.rho_scale, config.max_iterations, config.eps_tol};
      const GlobalEstimate est = fit_global(data, h, config.degree, epsilon,
                                            config.poly_family(), admm);
      job.risk = integrated_l2_risk(est, truth, config.grid_points);
    } else {
      LocalFitConfig fit = make_local_config(config.t0, h, config.degree,
                                             epsilon, config.poly_family(),
                                             data.a());
      fit.rho_scale = config.rho_scale;
      fit.max_iterations = config.max_iterations;
      fit.eps_tol = config.eps_tol;
      job.risk = pointwise_risk(point_estimate(fit_pointwise(data, fit)),
                                truth.value(config.t0));
    }
  });

  SweepReport report;
  for (const auto n : config.n_list) {
    std::vector<double> risks;
    for (const auto& job : jobs)
      if (job.n == n) risks.push_back(job.risk);
    SweepRow row;
    row.n = n;
    row.risk_mean = mean_of(risks);
    row.risk_std = std_of(risks, row.risk_mean);
    const RateKind upper = config.kind == ExperimentKind::SupnormSweep
                               ? RateKind::SupUpper
                               : (config.kind == ExperimentKind::PointwiseSweep
                                      ? RateKind::PointwiseUpper
                                      : RateKind::L2Upper);
    const RateKind lower = config.kind == ExperimentKind::SupnormSweep
                               ? RateKind::SupLower
                               : (config.kind == ExperimentKind::PointwiseSweep
                                      ? RateKind::PointwiseLower
                                      : RateKind::L2Lower);
    row.upper_rate = theoretical_rate(upper, config.m, config.r, n, config.beta,
                                      config.upper_constant);
    row.lower_rate = theoretical_rate(lower, config.m, config.r, n, config.beta,
                                      config.lower_constant);
    report.rows.push_back(row);
  }
  if (report.rows.size() >= 3) {
    std::vector<std::pair<double, double>> pairs;
    bool positive = true;
    for (const auto& row : report.rows) {
      if (!(row.risk_mean > 0.0)) positive = false;
      pairs.push_back({static_cast<double>(row.n), row.risk_mean});
    }
    if (positive) {
      const auto [slope, se] = rate_slope(pairs);
      report.slope = slope;
      report.slope_stderr = se;
    }
  }
  return report;
}

SelectionReport run_model_selection(const ExperimentConfig& config) {
  config.validate();
  const MatrixFunctionSpec truth = config.build_truth();
  std::size_t total = config.n_list.front();
  if (total % 2 != 0) ++total;
  const Dataset data = generate_dataset(truth, total, config.noise_level,
                                        config.seeds.front(), config.noise());
  SelectionConfig sc;
  sc.h_max = config.h_max;
  sc.h_min = config.h_min;
  sc.beta_lo = config.beta_lo;
  sc.beta_hi = config.beta_hi;
  sc.r = config.r;
  sc.penalty_d = config.penalty_d;
  sc.family = config.poly_family();
  sc.admm = AdmmSettings{config.rho_scale, config.max_iterations, config.eps_tol};
  sc.risk_grid = config.grid_points;
  sc.truth = &truth;
  return run_selection_pipeline(data, sc, config.seeds.front());
}

std::pair<BlockDiagEstimate, double> run_single_fit(const ExperimentConfig& config) {
  config.validate();
  const MatrixFunctionSpec truth = config.build_truth();
  const std::size_t n = config.n_list.front();
  const Dataset data = generate_dataset(truth, n, config.noise_level,
                                        config.seeds.front(), config.noise());
  const OrthoPolyBasis basis =
      OrthoPolyBasis::build(config.poly_family(), config.degree);
  const double h =
      config.h_override > 0.0
          ? config.h_override
          : optimal_bandwidth(config.m, config.r, n, config.degree, config.beta,
                              config.holder_l, data.a(), basis.phi(),
                              monomial_transform(basis).r_t, config.c1);
  const double epsilon =
      config.epsilon_override >= 0.0
          ? config.epsilon_override
          : penalty_epsilon(config.m, n, h, config.degree, data.a(), basis.phi(),
                            monomial_transform(basis).r_t, config.penalty_d);
  LocalFitConfig fit = make_local_config(config.t0, h, config.degree, epsilon,
                                         config.poly_family(), data.a());
  fit.rho_scale = config.rho_scale;
  fit.max_iterations = config.max_iterations;
  fit.eps_tol = config.eps_tol;
  BlockDiagEstimate estimate = fit_pointwise(data, fit);
  const double risk =
      pointwise_risk(point_estimate(estimate), truth.value(config.t0));
  return {std::move(estimate), risk};
}

void save_sweep_csv(const SweepReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << kSweepCsvHeader << "\n" << std::setprecision(17);
  for (const auto& row : report.rows)
    out << row.n << "," << row.risk_mean << "," << row.risk_std << ","
        << row.upper_rate << "," << row.lower_rate << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void write_manifest(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "library_version=" << kVersion << "\n";
  out << "seeds=";
  for (std::size_t i = 0; i < config.seeds.size(); ++i)
    out << (i ? "," : "") << config.seeds[i];
  out << "\n";
  out << "truth_seed=" << config.truth_seed << "\n";
  out << "config:\n" << config.to_json_text() << "\n";
}

void write_ppm_heatmap(const Hermitian& a, const std::string& path) {
  const int m = static_cast<int>(a.dim());
  const int cell = std::max(1, 256 / std::max(1, m));
  const int size = m * cell;
  double vmax = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) vmax = std::max(vmax, std::abs(a(i, j).real()));
  if (vmax == 0.0) vmax = 1.0;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P3\n" << size << " " << size << "\n255\n";
  for (int py = 0; py < size; ++py) {
    for (int px = 0; px < size; ++px) {
      const double v = a(py / cell, px / cell).real() / vmax;  // in [-1,1]
      int rch, gch, bch;
      if (v >= 0) {  // white -> red
        rch = 255;
        gch = bch = static_cast<int>(255 * (1.0 - v));
      } else {  // white -> blue
        bch = 255;
        rch = gch = static_cast<int>(255 * (1.0 + v));
      }
      out << rch << " " << gch << " " << bch << " ";
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void emit_heatmap_series(
    const MatrixFunctionSpec& truth, double t0,
    const std::vector<std::pair<std::size_t, Hermitian>>& estimates,
    const std::string& out_dir) {
  if (estimates.empty()) throw InvalidArgument("emit_heatmap_series: no estimates");
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  const Hermitian truth_matrix = truth.value(t0);
  save_matrix((dir / "truth.mat").string(), truth_matrix);
  write_ppm_heatmap(truth_matrix, (dir / "truth.ppm").string());
  for (const auto& [n, est] : estimates) {
    const std::string stem = "estimate_n" + std::to_string(n);
    save_matrix((dir / (stem + ".mat")).string(), est);
    write_ppm_heatmap(est, (dir / (stem + ".ppm")).string());
  }
}

void write_sweep_svg(const SweepReport& report, const std::string& path) {
  if (report.rows.empty()) throw InvalidArgument("write_sweep_svg: no rows");
  const int width = 640, height = 480, margin = 60;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  auto scan = [&](double x, double y) {
    if (y <= 0.0) return;
    xlo = std::min(xlo, std::log10(x));
    xhi = std::max(xhi, std::log10(x));
    ylo = std::min(ylo, std::log10(y));
    yhi = std::max(yhi, std::log10(y));
  };
  for (const auto& row : report.rows) {
    scan(static_cast<double>(row.n), row.risk_mean);
    scan(static_cast<double>(row.n), row.upper_rate);
    scan(static_cast<double>(row.n), row.lower_rate);
  }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  auto px = [&](double x) {
    return margin + (std::log10(x) - xlo) / (xhi - xlo) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin -
           (std::log10(y) - ylo) / (yhi - ylo) * (height - 2 * margin);
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  auto polyline = [&](const char* color, auto getter) {
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
    for (const auto& row : report.rows) {
      const double y = getter(row);
      if (y <= 0.0) continue;
      out << px(static_cast<double>(row.n)) << "," << py(y) << " ";
    }
    out << "'/>\n";
  };
  polyline("#d62728", [](const SweepRow& r) { return r.upper_rate; });
  polyline("#2ca02c", [](const SweepRow& r) { return r.lower_rate; });
  polyline("#1f77b4", [](const SweepRow& r) { return r.risk_mean; });
  for (const auto& row : report.rows)
    if (row.risk_mean > 0.0)
      out << "<circle cx='" << px(static_cast<double>(row.n)) << "' cy='"
          << py(row.risk_mean) << "' r='4' fill='#1f77b4'/>\n";
  out << "<text x='" << width / 2 << "' y='" << height - 15
      << "' text-anchor='middle'>log10 n</text>\n";
  out << "<text x='15' y='" << height / 2
      << "' transform='rotate(-90 15 " << height / 2
      << ")' text-anchor='middle'>log10 risk</text>\n";
  out << "</svg>\n";
}

void run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::filesystem::path dir(resolve_out_dir(config));
  std::filesystem::create_directories(dir);
  write_manifest(config, (dir / "manifest.txt").string());

  switch (config.kind) {
    case ExperimentKind::PointwiseSweep:
    case ExperimentKind::IntegratedSweep:
    case ExperimentKind::SupnormSweep: {
      const SweepReport report = run_sweep(config);
      save_sweep_csv(report, (dir / "sweep.csv").string());
      if (config.plots) {
        write_sweep_svg(report, (dir / "sweep.svg").string());
        if (config.kind == ExperimentKind::PointwiseSweep) {
          const MatrixFunctionSpec truth = config.build_truth();
          std::vector<std::pair<std::size_t, Hermitian>> estimates;
          for (const auto n : config.n_list) {
            ExperimentConfig one = config;
            one.kind = ExperimentKind::SingleFit;
            one.n_list = {n};
            one.seeds = {config.seeds.front()};
            estimates.push_back({n, point_estimate(run_single_fit(one).first)});
          }
          emit_heatmap_series(truth, config.t0, estimates,
                              (dir / "heatmaps").string());
        }
      }
      break;
    }
    case ExperimentKind::ModelSelection: {
      const SelectionReport report = run_model_selection(config);
      save_selection_csv(report, (dir / "selection.csv").string(),
                         /*include_risk=*/true);
      break;
    }
    case ExperimentKind::SingleFit: {
      const auto [fit, risk] = run_single_fit(config);
      const Hermitian estimate = point_estimate(fit);
      save_fit(fit, (dir / "fit").string());
      save_matrix((dir / "estimate.mat").string(), estimate);
      const MatrixFunctionSpec truth = config.build_truth();
      save_matrix((dir / "truth.mat").string(), truth.value(config.t0));
      SweepReport report;
      report.rows.push_back({config.n_list.front(), risk, 0.0,
                             theoretical_rate(RateKind::PointwiseUpper, config.m,
                                              config.r, config.n_list.front(),
                                              config.beta, config.upper_constant),
                             theoretical_rate(RateKind::PointwiseLower, config.m,
                                              config.r, config.n_list.front(),
                                              config.beta, config.lower_constant)});
      save_sweep_csv(report, (dir / "sweep.csv").string());
      if (config.plots) {
        write_ppm_heatmap(estimate, (dir / "estimate.ppm").string());
        write_ppm_heatmap(truth.value(config.t0), (dir / "truth.ppm").string());
      }
      break;
    }
  }
}

}  // namespace lrmf
