#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trunctail/estimators.hpp"
#include "trunctail/sorted_sample.hpp"

namespace trunctail {

enum class QQKind { Pareto, TruncatedPareto };

struct QQPoint {
  double x = 0.0;
  double y = 0.0;
};

struct QQPlot {
  QQKind kind = QQKind::Pareto;
  /// Ordered by j = 1..n: (log X_{n-j+1,n}, log(d + j/n)).
  std::vector<QQPoint> points;
  double d_used = 0.0;
  std::optional<std::size_t> k_star;
  /// Pearson correlation over the top-k_star points (all points for the
  /// Pareto kind); empty when undefined.
  std::optional<double> correlation;
};

/// Pearson correlation of the first `count` points; nullopt when either
/// coordinate is constant.
std::optional<double> qq_correlation(std::span<const QQPoint> points, std::size_t count);

/// Pareto QQ-plot (log X_{n-j+1,n}, log(j/n)).
QQPlot pareto_qq(const SortedSample& sample);

/// Truncated-Pareto QQ-plot (log X_{n-j+1,n}, log(d + j/n)) for a given odds
/// value d >= 0; d = 0 reproduces `pareto_qq` exactly.
QQPlot tpa_qq(const SortedSample& sample, double d);

/// Truncated-Pareto QQ-plot anchored at k_star: d = max(D_T, 0) from the
/// alpha solve at k_star, correlation over the top k_star points.
QQPlot tpa_qq_at(const SortedSample& sample, std::size_t k_star, double tol = kDefaultTol);

struct KStarOptions {
  std::size_t k_min = 11;
  /// At least 11. Evaluate every stride-th candidate starting at k_min.
  std::size_t stride = 1;
  double tol = kDefaultTol;
};

struct KStar {
  std::size_t k_star = 0;
  double correlation = 0.0;
};

/// Anchor k* maximizing |corr| of the truncated-Pareto QQ-plot over its top
/// k* points; ties go to the smallest k*. Candidates whose alpha solve fails
/// are skipped; throws NoCandidate when none remains. OpenMP over candidates.
KStar select_k_star(const SortedSample& sample, const KStarOptions& options = {});

/// Single-threaded reference for `select_k_star`.
KStar select_k_star_serial(const SortedSample& sample, const KStarOptions& options = {});

}  // namespace trunctail
