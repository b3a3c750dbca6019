#include "trunctail/qq.hpp"

#include <cmath>
#include <string>

#include "trunctail/error.hpp"

namespace trunctail {

namespace {

QQPlot build(const SortedSample& sample, double d, QQKind kind) {
  const std::size_t n = sample.size();
  if (n < 2) fail(ErrorCode::InvalidArgument, "QQ-plot needs at least two observations");
  if (!(d >= 0.0)) fail(ErrorCode::InvalidArgument, "QQ-plot odds value must be nonnegative");
  QQPlot plot;
  plot.kind = kind;
  plot.d_used = d;
  plot.points.reserve(n);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 1; j <= n; ++j) {
    plot.points.push_back({std::log(sample.top(j)), std::log(d + static_cast<double>(j) / nd)});
  }
  return plot;
}

// Score of one candidate anchor, or nullopt when it has to be skipped.
std::optional<double> candidate_score(const SortedSample& sample, std::size_t k, double tol) {
  try {
    const double alpha = alpha_trunc(sample, k, tol);
    const double d = d_hat_admissible(sample, k, alpha);
    const double nd = static_cast<double>(sample.size());
    std::vector<QQPoint> pts;
    pts.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) {
      pts.push_back({std::log(sample.top(j)), std::log(d + static_cast<double>(j) / nd)});
    }
    return qq_correlation(pts, k);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::size_t> candidates(const SortedSample& sample, const KStarOptions& o) {
  const std::size_t n = sample.size();
  if (o.k_min < 11 || o.stride == 0 || n < 2 || o.k_min > n - 1) {
    fail(ErrorCode::OutOfRange, "k* search needs 11 <= k_min <= n-1 and stride >= 1 (k_min = " +
                                    std::to_string(o.k_min) + ", n = " + std::to_string(n) + ")");
  }
  std::vector<std::size_t> ks;
  for (std::size_t k = o.k_min; k <= n - 1; k += o.stride) ks.push_back(k);
  return ks;
}

KStar pick(const std::vector<std::size_t>& ks, const std::vector<std::optional<double>>& scores) {
  std::optional<KStar> best;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!scores[i]) continue;
    if (!best || std::abs(*scores[i]) > std::abs(best->correlation)) best = KStar{ks[i], *scores[i]};
  }
  if (!best) fail(ErrorCode::NoCandidate, "no k* candidate admits an estimate");
  return *best;
}

}  // namespace

std::optional<double> qq_correlation(std::span<const QQPoint> points, std::size_t count) {
  if (count < 2 || count > points.size()) return std::nullopt;
  const double m = static_cast<double>(count);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += points[i].x;
    my += points[i].y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = points[i].x - mx;
    const double dy = points[i].y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

QQPlot pareto_qq(const SortedSample& sample) {
  QQPlot plot = build(sample, 0.0, QQKind::Pareto);
  plot.correlation = qq_correlation(plot.points, plot.points.size());
  return plot;
}

QQPlot tpa_qq(const SortedSample& sample, double d) {
  QQPlot plot = build(sample, d, QQKind::TruncatedPareto);
  plot.correlation = qq_correlation(plot.points, plot.points.size());
  return plot;
}

QQPlot tpa_qq_at(const SortedSample& sample, std::size_t k_star, double tol) {
  const double alpha = alpha_trunc(sample, k_star, tol);
  QQPlot plot = build(sample, d_hat_admissible(sample, k_star, alpha), QQKind::TruncatedPareto);
  plot.k_star = k_star;
  plot.correlation = qq_correlation(plot.points, k_star);
  return plot;
}

KStar select_k_star_serial(const SortedSample& sample, const KStarOptions& options) {
  const auto ks = candidates(sample, options);
  std::vector<std::optional<double>> scores;
  scores.reserve(ks.size());
  for (std::size_t k : ks) scores.push_back(candidate_score(sample, k, options.tol));
  return pick(ks, scores);
}

KStar select_k_star(const SortedSample& sample, const KStarOptions& options) {
  const auto ks = candidates(sample, options);
  std::vector<std::optional<double>> scores(ks.size());
  const auto count = static_cast<long long>(ks.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    scores[idx] = candidate_score(sample, ks[idx], options.tol);
  }
  return pick(ks, scores);
}

}  // namespace trunctail
