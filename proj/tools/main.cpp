#include "csv.hpp"

#include "uniband/band.hpp"
#include "uniband/errors.hpp"
#include "uniband/grid.hpp"
#include "uniband/serialize.hpp"
#include "uniband/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

namespace {

constexpr double nan_d = std::numeric_limits<double>::quiet_NaN();

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_numeric = 4;

void write_output(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw uniband::config_error("cannot open output file: " + path);
  }
  out << text;
}

std::pair<double, double> parse_region(const std::string& text)
{
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw uniband::config_error("region must be given as lower,upper");
  }
  double lo = 0.0;
  double hi = 0.0;
  const auto* s = text.data();
  auto r1 = std::from_chars(s, s + comma, lo);
  auto r2 = std::from_chars(s + comma + 1, s + text.size(), hi);
  if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != s + comma ||
      r2.ptr != s + text.size() || !(lo < hi)) {
    throw uniband::config_error("region must be given as lower,upper with lower < upper");
  }
  return { lo, hi };
}

double parse_bandwidth(const std::string& text)
{
  if (text == "auto") {
    return nan_d;
  }
  double h = 0.0;
  const auto* s = text.data();
  const auto r = std::from_chars(s, s + text.size(), h);
  if (r.ec != std::errc() || r.ptr != s + text.size() || !(h > 0.0)) {
    throw uniband::config_error("bandwidth must be \"auto\" or a positive number");
  }
  return h;
}

uniband::GridRule parse_rule(const std::string& name, double c_delta, double gamma, double delta)
{
  uniband::GridRule rule;
  rule.c_delta = c_delta;
  rule.gamma = gamma;
  rule.delta = delta;
  if (name == "proposition1") {
    rule.kind = uniband::GridRuleKind::SolvedMesh;
  } else if (name == "simple") {
    rule.kind = uniband::GridRuleKind::SimpleRule;
  } else if (name == "explicit") {
    rule.kind = uniband::GridRuleKind::ExplicitDelta;
    if (!(delta > 0.0)) {
      throw uniband::config_error("--delta must be positive with --rule explicit");
    }
  } else {
    throw uniband::config_error("unknown grid rule \"" + name +
                                "\" (expected proposition1, simple, or explicit)");
  }
  return rule;
}

struct BandOptions {
  std::string input;
  std::string output = "-";
  std::string kernel = "gaussian";
  std::string bandwidth = "auto";
  double alpha = 0.05;
  std::string region;
  std::string rule = "proposition1";
  double c_delta = 0.5;
  double gamma = 0.01;
  double delta = 0.0;
  double epsilon = nan_d;
  int draws = 2000;
  std::uint64_t seed = 0;
  int bins = 0;
  int threads = 0;
  std::string dump_maxima;
};

int run_band(const BandOptions& opt)
{
  uniband::BandRequest request;
  request.sample = uniband::cli::read_csv_column(opt.input);
  if (!opt.region.empty()) {
    std::tie(request.region_lower, request.region_upper) = parse_region(opt.region);
  }
  request.kernel = uniband::kernel_from_name(opt.kernel);
  request.bandwidth = parse_bandwidth(opt.bandwidth);
  request.alpha = opt.alpha;
  request.rule = parse_rule(opt.rule, opt.c_delta, opt.gamma, opt.delta);
  request.epsilon = opt.epsilon;
  request.histogram_bins = opt.bins;
  request.bootstrap.draws = opt.draws;
  request.bootstrap.master_seed = opt.seed;
  request.bootstrap.threads = opt.threads;

  const uniband::UniformBand band = uniband::build_band(request);
  write_output(opt.output, uniband::to_json(band).dump(2) + "\n");

  if (!opt.dump_maxima.empty()) {
    // rebuild the draws deterministically for the audit file
    const uniband::Kernel kernel = uniband::kernel_constants(request.kernel);
    const auto stat = uniband::kde_statistic(kernel, band.bandwidth);
    const auto eval = uniband::evaluate_at(request.sample, stat, band.grid.points);
    uniband::BootstrapConfig boot = request.bootstrap;
    boot.alpha = request.alpha;
    const auto cv = uniband::critical_value(eval, boot);
    std::ofstream out(opt.dump_maxima, std::ios::binary);
    if (!out) {
      throw uniband::config_error("cannot open maxima dump file: " + opt.dump_maxima);
    }
    out << "maximum\n";
    out.precision(17);
    for (Eigen::Index b = 0; b < cv.draws.maxima.size(); ++b) {
      out << cv.draws.maxima[b] << "\n";
    }
  }
  return exit_ok;
}

struct GridOptions {
  std::string input;
  std::string output = "-";
  std::string kernel = "gaussian";
  std::string bandwidth;
  std::string region;
  std::uint64_t n = 0;
  double epsilon = nan_d;
  double fmin = nan_d;
  double fmax = nan_d;
  int bins = 0;
};

int run_grid(const GridOptions& opt)
{
  Eigen::VectorXd data;
  const bool have_data = !opt.input.empty();
  if (have_data) {
    data = uniband::cli::read_csv_column(opt.input);
  }

  const std::size_t n = opt.n > 0 ? static_cast<std::size_t>(opt.n)
                                  : static_cast<std::size_t>(data.size());
  if (n < 2) {
    throw uniband::config_error("grid needs --n or an input file with at least 2 rows");
  }

  double lower = 0.0;
  double upper = 0.0;
  if (!opt.region.empty()) {
    std::tie(lower, upper) = parse_region(opt.region);
  } else if (have_data) {
    lower = uniband::sample_quantile(data, 0.05);
    upper = uniband::sample_quantile(data, 0.95);
  } else {
    throw uniband::config_error("grid needs --region when no input file is given");
  }

  double h = nan_d;
  if (!opt.bandwidth.empty()) {
    h = parse_bandwidth(opt.bandwidth);
  }
  if (std::isnan(h)) {
    if (!have_data) {
      throw uniband::config_error("grid needs an explicit --bandwidth when no input is given");
    }
    h = uniband::auto_bandwidth(data);
  }

  const uniband::Kernel kernel = uniband::kernel_constants(uniband::kernel_from_name(opt.kernel));
  uniband::PluginDensityExtrema extrema;
  if (!std::isnan(opt.fmin) || !std::isnan(opt.fmax)) {
    if (std::isnan(opt.fmin) || std::isnan(opt.fmax)) {
      throw uniband::config_error("--fmin and --fmax must be given together");
    }
    extrema = uniband::exact_extrema(opt.fmin, opt.fmax);
  } else if (have_data) {
    extrema = uniband::plugin_extrema(data, lower, upper, opt.bins);
  } else {
    throw uniband::config_error("grid needs --fmin/--fmax or an input file for the plug-ins");
  }

  const double eps = std::isnan(opt.epsilon) ? uniband::default_epsilon(n, h) : opt.epsilon;
  const uniband::MeshSolution solved =
    uniband::solve_mesh(kernel, h, n, lower, upper, extrema, eps);

  nlohmann::json j{
    { "schema", "uniband.grid.v1" },
    { "kernel", uniband::kernel_name(kernel.id) },
    { "n", n },
    { "bandwidth", h },
    { "region", nlohmann::json{ { "lower", lower }, { "upper", upper } } },
    { "constants", uniband::to_json(solved.report) },
    { "points", std::vector<double>(solved.grid.points.data(),
                                    solved.grid.points.data() + solved.grid.points.size()) },
  };
  write_output(opt.output, j.dump(2) + "\n");
  return exit_ok;
}

struct CoverageOptions {
  std::string output = "-";
  std::string dgp = "stdnormal";
  std::uint64_t n = 2000;
  double alpha = 0.1;
  std::string rule = "proposition1";
  double c_delta = 0.5;
  double gamma = 0.01;
  double delta = 0.0;
  int reps = 500;
  int draws = 1000;
  int oversample = 10;
  std::uint64_t seed = 0;
  std::string kernel = "gaussian";
  std::string bandwidth = "auto";
  std::string region;
  double epsilon = nan_d;
  int bins = 0;
  int threads = 0;
  std::string trace;
};

int run_coverage(const CoverageOptions& opt)
{
  uniband::CoverageConfig config;
  config.dgp = uniband::dgp_from_name(opt.dgp);
  config.n = static_cast<std::size_t>(opt.n);
  config.alpha = opt.alpha;
  config.rule = parse_rule(opt.rule, opt.c_delta, opt.gamma, opt.delta);
  config.replications = opt.reps;
  config.draws = opt.draws;
  config.oversample = opt.oversample;
  config.seed = opt.seed;
  config.kernel = uniband::kernel_from_name(opt.kernel);
  config.bandwidth = parse_bandwidth(opt.bandwidth);
  if (!opt.region.empty()) {
    std::tie(config.region_lower, config.region_upper) = parse_region(opt.region);
  }
  config.epsilon = opt.epsilon;
  config.histogram_bins = opt.bins;
  config.threads = opt.threads;

  const uniband::CoverageReport report = uniband::coverage_run(config);
  write_output(opt.output, uniband::to_json(report).dump(2) + "\n");

  if (!opt.trace.empty()) {
    std::ofstream out(opt.trace, std::ios::binary);
    if (!out) {
      throw uniband::config_error("cannot open trace file: " + opt.trace);
    }
    out << "replication,hit,failed,sup_proxy,c_hat,p,delta,bandwidth\n";
    out.precision(17);
    for (std::size_t rep = 0; rep < report.trace.size(); ++rep) {
      const auto& t = report.trace[rep];
      out << rep << "," << (t.hit ? 1 : 0) << "," << (t.failed ? 1 : 0) << "," << t.sup_proxy
          << "," << t.c_hat << "," << t.p << "," << t.delta << "," << t.bandwidth << "\n";
    }
  }
  return exit_ok;
}

int run_diagnose(const GridOptions& opt)
{
  // same inputs as `grid`, but every constant is echoed with its formula
  Eigen::VectorXd data;
  const bool have_data = !opt.input.empty();
  if (have_data) {
    data = uniband::cli::read_csv_column(opt.input);
  }
  const std::size_t n = opt.n > 0 ? static_cast<std::size_t>(opt.n)
                                  : static_cast<std::size_t>(data.size());
  if (n < 2) {
    throw uniband::config_error("diagnose needs --n or an input file with at least 2 rows");
  }
  double lower = 0.0;
  double upper = 0.0;
  if (!opt.region.empty()) {
    std::tie(lower, upper) = parse_region(opt.region);
  } else if (have_data) {
    lower = uniband::sample_quantile(data, 0.05);
    upper = uniband::sample_quantile(data, 0.95);
  } else {
    throw uniband::config_error("diagnose needs --region when no input file is given");
  }
  double h = nan_d;
  if (!opt.bandwidth.empty()) {
    h = parse_bandwidth(opt.bandwidth);
  }
  if (std::isnan(h)) {
    if (!have_data) {
      throw uniband::config_error("diagnose needs an explicit --bandwidth when no input is given");
    }
    h = uniband::auto_bandwidth(data);
  }
  const uniband::Kernel kernel = uniband::kernel_constants(uniband::kernel_from_name(opt.kernel));
  uniband::PluginDensityExtrema extrema;
  if (!std::isnan(opt.fmin) || !std::isnan(opt.fmax)) {
    if (std::isnan(opt.fmin) || std::isnan(opt.fmax)) {
      throw uniband::config_error("--fmin and --fmax must be given together");
    }
    extrema = uniband::exact_extrema(opt.fmin, opt.fmax);
  } else if (have_data) {
    extrema = uniband::plugin_extrema(data, lower, upper, opt.bins);
  } else {
    throw uniband::config_error("diagnose needs --fmin/--fmax or an input file");
  }
  const bool eps_default = std::isnan(opt.epsilon);
  const double eps = eps_default ? uniband::default_epsilon(n, h) : opt.epsilon;
  const uniband::MeshSolution solved =
    uniband::solve_mesh(kernel, h, n, lower, upper, extrema, eps);
  const uniband::ConstantsReport& rep = solved.report;

  nlohmann::json rows = nlohmann::json::array();
  const auto add = [&rows](const std::string& name, double value, const std::string& formula) {
    rows.push_back(nlohmann::json{ { "name", name }, { "value", value }, { "formula", formula } });
  };
  add("sup_K", kernel.sup_k0, "sup_u |K(u)|");
  add("sup_K1", kernel.sup_k1, "sup_u |K'(u)|");
  add("sup_K2", kernel.sup_k2, "sup_u |K''(u)|");
  add("int_K2", kernel.int_k2, "integral of K(u)^2");
  add("int_K4", kernel.int_k4, "integral of K(u)^4");
  add("int_K1_sq", kernel.int_k1_sq, "integral of K'(u)^2");
  add("f_min_hat", rep.f_min_hat, "histogram minimum over the region (floored) or --fmin");
  add("f_max_hat", rep.f_max_hat, "histogram maximum over the region or --fmax");
  add("epsilon", rep.epsilon,
      eps_default ? "min(0.1, (n*h)^(-1/4)/log(n))" : "user override");
  add("var_min", extrema.f_min_hat * kernel.int_k2 / h, "f_min_hat*int_K2/h");
  add("B_n", rep.b_n, "max(2*sup_K/(log(2)*h*sqrt(var_min)), "
                      "sqrt(16*f_max_hat*int_K4/(h^3*var_min^2)), 1)");
  add("m_n", static_cast<double>(rep.m_n), "floor(sqrt(n)*h^(-3/2)*(upper-lower)) + 2");
  add("M0", rep.m0, "2*sup_K/h");
  add("v0", rep.v0, "f_max_hat*int_K2/h");
  add("M1", rep.m1, "2*sup_K1/h^2");
  add("v1", rep.v1, "f_max_hat*int_K1_sq/h^3");
  add("A0", rep.a0,
      "sqrt(2*v0*log(2*m_n/(epsilon/2))/n) + M0*log(2*m_n/(epsilon/2))/(3*n) + sup_K1/sqrt(n*h)");
  add("A1", rep.a1, "sqrt(2*v1*log(2*m_n/(epsilon/2))/n) + M1*log(2*m_n/(epsilon/2))/(3*n) + "
                    "sup_K2/(sqrt(n)*h^(3/2))");
  add("sigma_inv_sup", rep.sigma_inv_sup, "sqrt(n*h/(int_K2*f_min_hat))");
  add("L_tilde", rep.l_tilde, "2*sigma_inv_sup*A1");
  add("L_second_term", rep.l_second_term, "2*sqrt(n*h)*A0");
  add("delta_hat", rep.delta,
      "(upper-lower)/(p_hat-1) after bisecting delta*L_tilde/2 = r(width/delta)");
  add("p_hat", static_cast<double>(rep.p), "ceil((upper-lower)/delta_tilde) + 2, deduplicated");
  add("max_gap", rep.max_gap, "largest spacing of the realized grid");
  add("r", rep.r, "2*(B_n^2*log^3(n*p_hat)/n)^(1/4)");
  add("rho_n", rep.rho_n, "(B_n^2*log^5(n*p_hat)/n)^(1/4)");
  add("hd_ratio", rep.hd_ratio, "B_n^2*log^5(n*p_hat)/n");
  add("indicator_ok", rep.indicator_ok ? 1.0 : 0.0, "L_tilde*max_gap/2 <= r");

  nlohmann::json j{
    { "schema", "uniband.diagnose.v1" },
    { "kernel", uniband::kernel_name(kernel.id) },
    { "n", n },
    { "bandwidth", h },
    { "region", nlohmann::json{ { "lower", lower }, { "upper", upper } } },
    { "constants", std::move(rows) },
  };
  write_output(opt.output, j.dump(2) + "\n");
  return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Uniform confidence bands for kernel density estimates via Gaussian-multiplier "
                "bootstrap on an automatically sized evaluation grid" };
  app.require_subcommand(1);

  BandOptions band_opt;
  auto* band = app.add_subcommand("band", "Build a uniform confidence band from a data file");
  band->add_option("--input", band_opt.input, "one-column CSV of observations")->required();
  band->add_option("--output", band_opt.output, "output JSON path (- for stdout)");
  band->add_option("--kernel", band_opt.kernel, "gaussian | triweight");
  band->add_option("--bandwidth", band_opt.bandwidth, "positive number or \"auto\"");
  band->add_option("--alpha", band_opt.alpha, "band level is 1 - alpha");
  band->add_option("--region", band_opt.region, "inference region lower,upper");
  band->add_option("--rule", band_opt.rule, "proposition1 | simple | explicit");
  band->add_option("--c-delta", band_opt.c_delta, "simple-rule mesh constant in (0,1)");
  band->add_option("--gamma", band_opt.gamma, "simple-rule mesh exponent > 0");
  band->add_option("--delta", band_opt.delta, "mesh size for --rule explicit");
  band->add_option("--epsilon", band_opt.epsilon, "local-variation exceedance budget");
  band->add_option("--draws", band_opt.draws, "bootstrap draws");
  band->add_option("--seed", band_opt.seed, "master seed");
  band->add_option("--bins", band_opt.bins, "histogram bins override for the plug-ins");
  band->add_option("--threads", band_opt.threads, "worker cap (0 = auto); never changes output");
  band->add_option("--dump-maxima", band_opt.dump_maxima, "CSV audit dump of bootstrap maxima");

  GridOptions grid_opt;
  auto* grid = app.add_subcommand("grid", "Mesh selection and the constants ledger");
  grid->add_option("--input", grid_opt.input, "optional one-column CSV for the plug-ins");
  grid->add_option("--output", grid_opt.output, "output JSON path (- for stdout)");
  grid->add_option("--kernel", grid_opt.kernel, "gaussian | triweight");
  grid->add_option("--bandwidth", grid_opt.bandwidth, "positive number or \"auto\" (with data)");
  grid->add_option("--region", grid_opt.region, "inference region lower,upper");
  grid->add_option("--n", grid_opt.n, "sample size for formula-only runs");
  grid->add_option("--epsilon", grid_opt.epsilon, "local-variation exceedance budget");
  grid->add_option("--fmin", grid_opt.fmin, "density infimum override");
  grid->add_option("--fmax", grid_opt.fmax, "density supremum override");
  grid->add_option("--bins", grid_opt.bins, "histogram bins override");

  CoverageOptions cov_opt;
  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage experiment");
  coverage->add_option("--output", cov_opt.output, "output JSON path (- for stdout)");
  coverage->add_option("--dgp", cov_opt.dgp, "stdnormal | mixture | beta22");
  coverage->add_option("--n", cov_opt.n, "sample size per replication");
  coverage->add_option("--alpha", cov_opt.alpha, "band level is 1 - alpha");
  coverage->add_option("--rule", cov_opt.rule, "proposition1 | simple | explicit");
  coverage->add_option("--c-delta", cov_opt.c_delta, "simple-rule mesh constant");
  coverage->add_option("--gamma", cov_opt.gamma, "simple-rule mesh exponent");
  coverage->add_option("--delta", cov_opt.delta, "mesh size for --rule explicit");
  coverage->add_option("--reps", cov_opt.reps, "Monte Carlo replications");
  coverage->add_option("--draws", cov_opt.draws, "bootstrap draws per replication");
  coverage->add_option("--oversample", cov_opt.oversample, "grid refinement for the sup proxy");
  coverage->add_option("--seed", cov_opt.seed, "master seed");
  coverage->add_option("--kernel", cov_opt.kernel, "gaussian | triweight");
  coverage->add_option("--bandwidth", cov_opt.bandwidth, "positive number or \"auto\"");
  coverage->add_option("--region", cov_opt.region, "inference region (default: DGP region)");
  coverage->add_option("--epsilon", cov_opt.epsilon, "local-variation exceedance budget");
  coverage->add_option("--bins", cov_opt.bins, "histogram bins override");
  coverage->add_option("--threads", cov_opt.threads, "worker cap (0 = auto); never changes output");
  coverage->add_option("--trace", cov_opt.trace, "per-replication CSV trace path");

  GridOptions diag_opt;
  auto* diagnose = app.add_subcommand("diagnose", "Echo every constant with its formula");
  diagnose->add_option("--input", diag_opt.input, "optional one-column CSV for the plug-ins");
  diagnose->add_option("--output", diag_opt.output, "output JSON path (- for stdout)");
  diagnose->add_option("--kernel", diag_opt.kernel, "gaussian | triweight");
  diagnose->add_option("--bandwidth", diag_opt.bandwidth, "positive number or \"auto\"");
  diagnose->add_option("--region", diag_opt.region, "inference region lower,upper");
  diagnose->add_option("--n", diag_opt.n, "sample size for formula-only runs");
  diagnose->add_option("--epsilon", diag_opt.epsilon, "local-variation exceedance budget");
  diagnose->add_option("--fmin", diag_opt.fmin, "density infimum override");
  diagnose->add_option("--fmax", diag_opt.fmax, "density supremum override");
  diagnose->add_option("--bins", diag_opt.bins, "histogram bins override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e); // --help
    }
    app.exit(e);
    return exit_input;
  }

  try {
    if (band->parsed()) {
      return run_band(band_opt);
    }
    if (grid->parsed()) {
      return run_grid(grid_opt);
    }
    if (coverage->parsed()) {
      return run_coverage(cov_opt);
    }
    return run_diagnose(diag_opt);
  } catch (const uniband::infeasible_mesh_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_infeasible;
  } catch (const uniband::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const uniband::degenerate_variance_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const uniband::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  }
}
