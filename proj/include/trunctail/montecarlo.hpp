#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trunctail/distributions.hpp"
#include "trunctail/estimators.hpp"

namespace trunctail {

enum class Estimator {
  AlphaTrunc,     // alpha_trunc, truth alpha
  HillInverse,    // 1/H, truth alpha
  Mom,            // moment xi estimate, truth 1/alpha
  QTrunc,         // truncated quantile, truth Q(1-p)
  QWeissman,      // Weissman quantile, truth Q(1-p)
  QMom,           // moment quantile, truth Q(1-p)
  EndpointTrunc,  // truncated endpoint, truth T
  EndpointMom,    // moment endpoint, truth T
  TestTA,         // T_A statistic and p-value
  TestTB,         // T_B statistic and p-value
};

inline constexpr std::array kAllEstimators = {
    Estimator::AlphaTrunc, Estimator::HillInverse,   Estimator::Mom,         Estimator::QTrunc,
    Estimator::QWeissman,  Estimator::QMom,          Estimator::EndpointTrunc, Estimator::EndpointMom,
    Estimator::TestTA,     Estimator::TestTB,
};

std::string_view to_string(Estimator e) noexcept;
Estimator parse_estimator(std::string_view name);

struct SimConfig {
  TailModel model = ParetoModel(1.0);
  std::size_t n = 400;
  std::size_t runs = 200;
  /// Empty means the default grid: every 5th k from 10 to n-10.
  std::vector<std::size_t> k_grid;
  double p_target = 0.002;
  std::uint64_t seed = 1;
  std::vector<Estimator> estimators{kAllEstimators.begin(), kAllEstimators.end()};
  bool use_raw_d = false;
  double tol = kDefaultTol;
};

std::vector<std::size_t> default_k_grid(std::size_t n);
/// Fills in the default grid and throws ConfigError on invalid settings.
SimConfig validated(SimConfig config);

/// Parses `key = value` lines (`#` comments). Keys: model, n, runs, k_grid,
/// p, seed, estimators, d_raw. k_grid is `default`, `a:b[:step]` or a
/// comma list; estimators is `all` or a comma list.
SimConfig parse_sim_config(std::istream& in);
SimConfig load_sim_config(const std::filesystem::path& path);
std::vector<std::size_t> parse_k_grid(std::string_view text);
/// `all` or a comma list of estimator names.
std::vector<Estimator> parse_estimators(std::string_view text);

/// Per-estimator, per-k outcome of one replication.
struct CellValue {
  std::optional<double> value;
  std::optional<double> p_value;
  std::optional<ErrorCode> error;
};

struct ReplicationResult {
  std::size_t replication = 0;
  /// Indexed [estimator position in config.estimators][k position in k_grid].
  std::vector<std::vector<CellValue>> cells;
};

/// The sample drawn for replication r (stream derived from (seed, r)).
SortedSample replication_sample(const SimConfig& config, std::size_t r);
/// Evaluates every enabled estimator on one drawn sample. `config` must
/// already be validated.
ReplicationResult evaluate_replication(const SimConfig& config, const SortedSample& sample, std::size_t r);

struct SummaryRow {
  Estimator estimator = Estimator::AlphaTrunc;
  std::size_t k = 0;
  std::optional<double> mean;
  std::optional<double> rmse;
  std::optional<double> mean_p;
  std::size_t failures = 0;
};

struct SimSummary {
  std::string model_spec;  // full grammar string
  std::string base_spec;   // parent model
  std::string t_spec;      // "Tq=0.9", "T=10" or "inf"
  std::size_t n = 0;
  std::size_t runs = 0;
  double p_target = 0.0;
  std::uint64_t seed = 0;
  double true_alpha = 0.0;
  double true_quantile = 0.0;
  double true_endpoint = 0.0;  // +inf without truncation
  std::vector<SummaryRow> rows;

  const SummaryRow* find(Estimator e, std::size_t k) const;
};

/// Monte Carlo over replications with OpenMP. Output is bit-identical for a
/// given config regardless of thread count.
SimSummary run_simulation(const SimConfig& config);
/// Single-threaded reference for `run_simulation`.
SimSummary run_simulation_serial(const SimConfig& config);

/// The 3x3 design {Pa(0.5), Pa(2), Burr(2,-1)} x {Tq=0.90, Tq=0.99, none}
/// with n = 400 and p = 0.002.
std::vector<SimConfig> paper_grid_configs(std::uint64_t base_seed, std::size_t runs = 200);
std::vector<SimSummary> replicate_paper_grid(std::uint64_t base_seed, std::size_t runs = 200);

/// Long format: model,T_spec,estimator,k,mean,rmse,mean_p,failures.
void write_summary_csv(std::ostream& out, const std::vector<SimSummary>& summaries);
void write_summary_json(std::ostream& out, const std::vector<SimSummary>& summaries);

}  // namespace trunctail
