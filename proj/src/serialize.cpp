#include "uniband/serialize.hpp"

#include <vector>

namespace uniband {

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v)
{
  return std::vector<double>(v.data(), v.data() + v.size());
}

} // namespace

nlohmann::json to_json(const ConstantsReport& report)
{
  return nlohmann::json{
    { "B_n", report.b_n },
    { "r", report.r },
    { "rho_n", report.rho_n },
    { "epsilon", report.epsilon },
    { "A0", report.a0 },
    { "A1", report.a1 },
    { "L_tilde", report.l_tilde },
    { "L_second_term", report.l_second_term },
    { "m_n", report.m_n },
    { "M0", report.m0 },
    { "M1", report.m1 },
    { "v0", report.v0 },
    { "v1", report.v1 },
    { "sigma_inv_sup", report.sigma_inv_sup },
    { "indicator_ok", report.indicator_ok },
    { "delta_hat", report.delta },
    { "p_hat", report.p },
    { "max_gap", report.max_gap },
    { "f_min_hat", report.f_min_hat },
    { "f_max_hat", report.f_max_hat },
    { "bins", report.bins },
    { "hd_ratio", report.hd_ratio },
    { "notes", report.notes },
  };
}

nlohmann::json to_json(const UniformBand& band)
{
  Eigen::VectorXd lower = band.center - band.half_width;
  Eigen::VectorXd upper = band.center + band.half_width;
  return nlohmann::json{
    { "schema", "uniband.band.v1" },
    { "kernel", kernel_name(band.kernel) },
    { "bandwidth", band.bandwidth },
    { "alpha", band.alpha },
    { "n", band.n },
    { "draws", band.draws },
    { "seed", band.seed },
    { "critical_value", band.c_hat },
    { "grid",
      nlohmann::json{
        { "lower", band.grid.lower },
        { "upper", band.grid.upper },
        { "delta", band.grid.delta },
        { "max_gap", band.grid.max_gap },
        { "p", band.grid.p() },
        { "points", to_vector(band.grid.points) },
      } },
    { "center", to_vector(band.center) },
    { "half_width", to_vector(band.half_width) },
    { "lower", to_vector(lower) },
    { "upper", to_vector(upper) },
    { "constants", to_json(band.constants) },
    { "warnings", band.warnings },
  };
}

nlohmann::json to_json(const CoverageReport& report, bool include_trace)
{
  nlohmann::json j{
    { "schema", "uniband.coverage.v1" },
    { "dgp", report.dgp },
    { "n", report.n },
    { "alpha", report.alpha },
    { "nominal", report.nominal },
    { "grid_rule", report.grid_rule },
    { "replications", report.replications },
    { "hits", report.hits },
    { "failures", report.failures },
    { "coverage_hat", report.coverage_hat },
    { "binomial_se", report.binomial_se },
    { "oversample", report.oversample },
    { "draws", report.draws },
    { "seed", report.seed },
    { "first_replication",
      nlohmann::json{
        { "bandwidth", report.first_bandwidth },
        { "p", report.first_p },
        { "B_n", report.first_b_n },
        { "L_tilde", report.first_l_tilde },
        { "r", report.first_r },
        { "epsilon", report.first_epsilon },
        { "delta", report.first_delta },
      } },
  };
  if (include_trace) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : report.trace) {
      rows.push_back(nlohmann::json{
        { "hit", t.hit },
        { "failed", t.failed },
        { "sup_proxy", t.sup_proxy },
        { "c_hat", t.c_hat },
        { "p", t.p },
        { "delta", t.delta },
        { "bandwidth", t.bandwidth },
      });
    }
    j["trace"] = std::move(rows);
  }
  return j;
}

} // namespace uniband
