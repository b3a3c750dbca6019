#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trunctail/estimators.hpp"

namespace trunctail {

struct FitOptions {
  double tol = kDefaultTol;
  /// Use the raw odds estimate instead of max(D_T, 0) for quantiles and
  /// endpoints.
  bool use_raw_d = false;
};

/// Truncated-Pareto estimates at one k, all sharing a single alpha solve.
struct TailFit {
  std::size_t k = 0;
  double hill = 0.0;
  double ratio = 0.0;
  double alpha_trunc = 0.0;
  double d_raw = 0.0;
  double d_admissible = 0.0;
  double tau_hat = 0.0;
  /// Empty when the odds estimate in use makes the quantile undefined.
  std::optional<double> q_trunc;
  std::optional<ErrorCode> q_error;
  Endpoint endpoint = Endpoint::infinite();
};

/// Throws the alpha solver's error (NoRoot, TiedExtremes, ...).
TailFit tail_fit(const SortedSample& sample, std::size_t k, double p, const FitOptions& options = {});

/// Every estimator at one k. Estimation failures are recorded, not thrown.
struct PathEntry {
  std::size_t k = 0;
  double hill = 0.0;
  double ratio = 0.0;
  double q_weissman = 0.0;
  std::optional<TailFit> fit;
  std::optional<ErrorCode> fit_error;
  std::optional<MomFit> mom;
  std::optional<ErrorCode> mom_error;
  std::optional<double> q_mom;
  std::optional<Endpoint> endpoint_mom;
};

PathEntry fit_at(const SortedSample& sample, std::size_t k, double p, const FitOptions& options = {});

/// Entries for k = k_first..k_last, in increasing k. OpenMP over k.
std::vector<PathEntry> fit_path(const SortedSample& sample, std::size_t k_first, std::size_t k_last,
                                double p, const FitOptions& options = {});

/// Single-threaded reference for `fit_path`; results are identical.
std::vector<PathEntry> fit_path_serial(const SortedSample& sample, std::size_t k_first,
                                       std::size_t k_last, double p, const FitOptions& options = {});

}  // namespace trunctail
