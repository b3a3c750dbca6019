#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include "trunctail/error.hpp"
#include "trunctail/sorted_sample.hpp"

namespace trunctail {

inline constexpr double kDefaultTol = 1e-12;

/// Right-endpoint estimate. `infinite()` means no finite endpoint was
/// detected; it is a distinct state, not a large number.
class Endpoint {
 public:
  static Endpoint infinite() noexcept { return Endpoint(); }
  static Endpoint finite(double value) noexcept { return Endpoint(value); }

  bool is_finite() const noexcept { return value_.has_value(); }
  /// Finite value; throws InvalidArgument for the infinite state.
  double value() const;
  double value_or_inf() const noexcept {
    return value_.value_or(std::numeric_limits<double>::infinity());
  }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;

 private:
  Endpoint() = default;
  explicit Endpoint(double v) : value_(v) {}
  std::optional<double> value_;
};

struct MomFit {
  std::size_t k = 0;
  double m1 = 0.0;
  double m2 = 0.0;
  double xi_minus = 0.0;
  double xi_mom = 0.0;
};

/// Scalar formulas shared by the sample-level estimators. `n`, `k` are the
/// sample size and number of top order statistics; `threshold` is X_{n-k,n}.
namespace kernel {

/// Root in alpha of  h = 1/alpha + r^alpha log r / (1 - r^alpha).
///
/// Newton-Raphson on 1/alpha starting from 1/alpha = h, with a bisection
/// fallback. Throws NoRoot when h >= -log(r)/2 (no solution exists) and
/// InvalidArgument unless h > 0 and 0 < r < 1.
double solve_alpha(double h, double r, double tol = kDefaultTol);

/// h - 1/alpha - r^alpha log r / (1 - r^alpha), evaluated stably.
double alpha_equation_residual(double h, double r, double alpha);

double d_hat(double ratio, std::size_t n, std::size_t k, double alpha);
double tau_hat(double threshold, double ratio, std::size_t n, std::size_t k, double alpha);
double quantile_trunc(double threshold, std::size_t n, std::size_t k, double p, double d, double alpha);
double quantile_light(double threshold, std::size_t n, std::size_t k, double p, double alpha);
double quantile_weissman(double threshold, std::size_t n, std::size_t k, double p, double hill);
Endpoint endpoint(double threshold, double maximum, std::size_t n, std::size_t k, double d, double alpha);
double mom_quantile(double threshold, std::size_t n, const MomFit& fit, double p);
Endpoint mom_endpoint(double threshold, double maximum, const MomFit& fit);

}  // namespace kernel

/// Throws OutOfRange unless 1 <= k <= n-1.
void check_k(const SortedSample& sample, std::size_t k);

/// Hill statistic H_{k,n}.
double hill(const SortedSample& sample, std::size_t k);
/// R_{k,n} = X_{n-k,n} / X_{n,n}.
double ratio_stat(const SortedSample& sample, std::size_t k);

/// Truncated-Pareto tail index from the top k order statistics.
/// Throws TiedExtremes when X_{n-k,n} = X_{n,n}, NoRoot past the
/// light-truncation boundary.
double alpha_trunc(const SortedSample& sample, std::size_t k, double tol = kDefaultTol);

/// Same estimator with the r-1 largest observations deleted; r = 1 gives
/// exactly `alpha_trunc`.
double alpha_trunc_trimmed(const SortedSample& sample, std::size_t r, std::size_t k,
                           double tol = kDefaultTol);

double tau_hat(const SortedSample& sample, std::size_t k, double alpha);

/// Odds-ratio estimate D_T (may be negative) and its clamp max(D_T, 0).
double d_hat(const SortedSample& sample, std::size_t k, double alpha);
double d_hat_admissible(const SortedSample& sample, std::size_t k, double alpha);

/// Extreme quantile Q(1-p) under a truncated Pareto-type tail. `d` is an odds
/// estimate; throws InvalidOdds if d + p <= 0 (only possible with raw d).
double quantile_trunc(const SortedSample& sample, std::size_t k, double p, double d, double alpha);
double quantile_light(const SortedSample& sample, std::size_t k, double p, double alpha);
double quantile_weissman(const SortedSample& sample, std::size_t k, double p);

/// Endpoint T: max(q_0, X_{n,n}) for d > 0, infinite for d <= 0.
Endpoint endpoint_hat(const SortedSample& sample, std::size_t k, double d, double alpha);

/// Moment (Dekkers-Einmahl-de Haan) estimator; throws DegenerateMoments
/// when the log-excesses are constant.
MomFit mom_fit(const SortedSample& sample, std::size_t k);
double mom_quantile(const SortedSample& sample, std::size_t k, double p);
Endpoint mom_endpoint(const SortedSample& sample, std::size_t k);

}  // namespace trunctail
