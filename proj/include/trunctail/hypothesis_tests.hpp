#pragma once

#include <cstddef>

#include "trunctail/sorted_sample.hpp"

namespace trunctail {

enum class TestName { TA, TB };

struct TestOutcome {
  TestName name = TestName::TA;
  double statistic = 0.0;
  double p_value = 1.0;
  double level = 0.05;
  bool reject = false;
};

/// Standard normal CDF via erfc.
double normal_cdf(double x);
/// z with P(N(0,1) > z) = q.
double normal_upper_quantile(double q);

/// Outcome of the T_A test for a given statistic: p = exp(-stat),
/// reject iff stat > log(1/level).
TestOutcome ta_outcome(double statistic, double level);
/// Outcome of the T_B test for a given statistic: p = Phi(stat),
/// reject iff stat < -z_level.
TestOutcome tb_outcome(double statistic, double level);

/// T_A = k R_{k,n}^{1/H_{k,n}}. Throws TiedExtremes or ZeroHill.
TestOutcome test_ta(const SortedSample& sample, std::size_t k, double level);

/// E_{k,n}(alpha) = (1/k) sum_j (X_{n-k,n} / X_{n-j+1,n})^alpha.
double e_stat(const SortedSample& sample, std::size_t k, double alpha);
/// L = (E - 1/2) / (1 - E); throws DegenerateE for E >= 1.
double l_from_e(double e);
double l_stat(const SortedSample& sample, std::size_t k, double alpha);

/// T_B = sqrt(12 k) L_{k,n}(1/H_{k,n}). Throws ZeroHill or DegenerateE.
TestOutcome test_tb(const SortedSample& sample, std::size_t k, double level);
/// T_B with an externally supplied alpha in place of 1/H_{k,n}.
TestOutcome test_tb_with_alpha(const SortedSample& sample, std::size_t k, double level, double alpha);

/// In-probability limit of E_{k,n}(1/H_{k,n}) under rough truncation with
/// k/(n D_T) -> kappa; lies in (0, 1/2).
double e_limit_rough(double kappa);
/// Corresponding limit of L_{k,n}(1/H_{k,n}); strictly negative.
double l_limit_rough(double kappa);

/// delta_kappa = 1 - (1 + kappa) log^2(1 + kappa) / kappa^2.
double delta_kappa(double kappa);
/// Asymptotic variance 1 / (k delta_kappa alpha^2) of the truncated-Pareto
/// index estimator under rough truncation. Throws NonpositiveDelta.
double alpha_var_rough(std::size_t k, double kappa, double alpha);

}  // namespace trunctail
