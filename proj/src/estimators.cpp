#include "trunctail/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trunctail/numeric_format.hpp"

namespace trunctail {

double Endpoint::value() const {
  if (!value_) fail(ErrorCode::InvalidArgument, "endpoint estimate is infinite");
  return *value_;
}

namespace kernel {

namespace {

constexpr int kNewtonMaxIter = 50;
constexpr int kBisectionMaxIter = 400;

// 1 - x / (e^x - 1): the mean log-excess of a truncated exponential, scaled.
// For alpha = x / L it gives 1/alpha + r^alpha log r / (1 - r^alpha) = phi(x) / alpha.
double phi(double x) {
  if (x < 1e-2) {
    const double x2 = x * x;
    return x * (0.5 - x / 12.0 + x2 * x / 720.0 - x2 * x2 * x / 30240.0);
  }
  return 1.0 - x * std::exp(-x) / -std::expm1(-x);
}

// alpha^2 r^alpha log^2 r / (1 - r^alpha)^2 written in x = alpha * (-log r).
double newton_term(double x) {
  const double em1 = std::expm1(-x);
  return x * x * std::exp(-x) / (em1 * em1);
}

double residual(double h, double log_r_neg, double alpha) {
  return h - phi(alpha * log_r_neg) / alpha;
}

double bisect(double h, double L, double tol) {
  double lo = 1e-12;
  double hi = std::max(10.0 / h, 1e3);
  double f_lo = residual(h, L, lo);
  if (f_lo >= 0.0) {
    if (std::abs(f_lo) < tol) return lo;
    fail(ErrorCode::NonConvergence, "alpha root lies below the solver bracket");
  }
  // residual is increasing in alpha; bisect geometrically
  double best = hi;
  double best_f = std::abs(residual(h, L, hi));
  for (int i = 0; i < kBisectionMaxIter && hi / lo - 1.0 > 4e-16; ++i) {
    const double mid = std::sqrt(lo * hi);
    const double f = residual(h, L, mid);
    if (std::abs(f) < best_f) {
      best = mid;
      best_f = std::abs(f);
    }
    if (f == 0.0) break;
    (f < 0.0 ? lo : hi) = mid;
  }
  if (!(best_f < tol)) fail(ErrorCode::NonConvergence, "bisection did not reach the residual tolerance");
  return best;
}

}  // namespace

double alpha_equation_residual(double h, double r, double alpha) {
  return residual(h, -std::log(r), alpha);
}

double solve_alpha(double h, double r, double tol) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorCode::InvalidArgument, "log-excess mean must be positive, got " + format_double(h));
  }
  if (!(r > 0.0 && r < 1.0)) {
    fail(ErrorCode::InvalidArgument, "ratio must lie in (0, 1), got " + format_double(r));
  }
  const double L = -std::log(r);
  if (!(h < 0.5 * L)) {
    fail(ErrorCode::NoRoot, "no root: h = " + format_double(h) + " >= -log(r)/2 = " + format_double(0.5 * L));
  }

  // Newton-Raphson in t = 1/alpha from the Hill start t = h.
  double t = h;
  for (int i = 0; i < kNewtonMaxIter; ++i) {
    const double alpha = 1.0 / t;
    const double f = residual(h, L, alpha);
    const double slope = 1.0 - newton_term(alpha * L);
    const double next = t + f / slope;
    if (!std::isfinite(next) || !(next > 0.0)) break;
    const double step = std::abs(next - t);
    t = next;
    if (step <= tol * t) {
      const double a = 1.0 / t;
      if (std::abs(residual(h, L, a)) < tol) return a;
      break;
    }
  }
  return bisect(h, L, tol);
}

double d_hat(double ratio, std::size_t n, std::size_t k, double alpha) {
  const double log_r = std::log(ratio);
  const double ra = std::exp(alpha * log_r);
  const double one_minus_ra = -std::expm1(alpha * log_r);
  if (!(one_minus_ra > 0.0)) fail(ErrorCode::TiedExtremes, "R^alpha = 1: threshold ties with the maximum");
  const double kp1 = static_cast<double>(k + 1);
  return kp1 / static_cast<double>(n + 1) * (ra - 1.0 / kp1) / one_minus_ra;
}

double tau_hat(double threshold, double ratio, std::size_t n, std::size_t k, double alpha) {
  const double nd = static_cast<double>(n);
  const double base = nd - static_cast<double>(n - k) * std::pow(ratio, alpha);
  if (!(base > 0.0)) fail(ErrorCode::InvalidArgument, "tau_hat: non-positive base");
  return threshold * std::pow(static_cast<double>(k) / base, 1.0 / alpha);
}

double quantile_trunc(double threshold, std::size_t n, std::size_t k, double p, double d, double alpha) {
  const double a = static_cast<double>(k + 1) / static_cast<double>(n + 1);
  if (!(d + p > 0.0)) {
    fail(ErrorCode::InvalidOdds, "d + p must be positive, got d = " + format_double(d));
  }
  return threshold * std::pow((d + a) / (d + p), 1.0 / alpha);
}

double quantile_light(double threshold, std::size_t n, std::size_t k, double p, double alpha) {
  const double a = static_cast<double>(k + 1) / static_cast<double>(n + 1);
  return threshold * std::pow(a / p, 1.0 / alpha);
}

double quantile_weissman(double threshold, std::size_t n, std::size_t k, double p, double hill) {
  const double a = static_cast<double>(k + 1) / static_cast<double>(n + 1);
  return threshold * std::pow(a / p, hill);
}

Endpoint endpoint(double threshold, double maximum, std::size_t n, std::size_t k, double d, double alpha) {
  if (!(d > 0.0)) return Endpoint::infinite();
  const double a = static_cast<double>(k + 1) / static_cast<double>(n + 1);
  return Endpoint::finite(std::max(threshold * std::pow((d + a) / d, 1.0 / alpha), maximum));
}

double mom_quantile(double threshold, std::size_t n, const MomFit& fit, double p) {
  const double log_factor = std::log(static_cast<double>(fit.k) / (static_cast<double>(n) * p));
  const double scale = threshold * fit.m1 * (1.0 - fit.xi_minus);
  if (fit.xi_mom == 0.0) return threshold + scale * log_factor;
  return threshold + scale * std::expm1(fit.xi_mom * log_factor) / fit.xi_mom;
}

Endpoint mom_endpoint(double threshold, double maximum, const MomFit& fit) {
  if (!(fit.xi_mom < 0.0)) return Endpoint::infinite();
  const double raw = threshold - threshold * fit.m1 * (1.0 - fit.xi_minus) / fit.xi_mom;
  return Endpoint::finite(std::max(raw, maximum));
}

}  // namespace kernel

namespace {

// (1/(k-r+1)) sum_{j=r..k} log(X_{n-j+1,n} / X_{n-k,n})
double mean_log_excess(const SortedSample& s, std::size_t r, std::size_t k) {
  const double thr = s.threshold(k);
  double sum = 0.0;
  for (std::size_t j = r; j <= k; ++j) sum += std::log(s.top(j) / thr);
  return sum / static_cast<double>(k - r + 1);
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "p must lie in (0, 1), got " + format_double(p));
}

}  // namespace

void check_k(const SortedSample& sample, std::size_t k) {
  const std::size_t n = sample.size();
  if (n < 2 || k < 1 || k > n - 1) {
    fail(ErrorCode::OutOfRange,
         "k = " + std::to_string(k) + " outside [1, n-1] for n = " + std::to_string(n));
  }
}

double hill(const SortedSample& sample, std::size_t k) {
  check_k(sample, k);
  return mean_log_excess(sample, 1, k);
}

double ratio_stat(const SortedSample& sample, std::size_t k) {
  check_k(sample, k);
  return sample.threshold(k) / sample.max();
}

double alpha_trunc(const SortedSample& sample, std::size_t k, double tol) {
  return alpha_trunc_trimmed(sample, 1, k, tol);
}

double alpha_trunc_trimmed(const SortedSample& sample, std::size_t r, std::size_t k, double tol) {
  check_k(sample, k);
  if (r < 1 || r > k) {
    fail(ErrorCode::OutOfRange, "trim r = " + std::to_string(r) + " outside [1, k]");
  }
  const double thr = sample.threshold(k);
  const double top = sample.top(r);
  if (!(thr < top)) fail(ErrorCode::TiedExtremes, "threshold ties with the largest retained observation");
  return kernel::solve_alpha(mean_log_excess(sample, r, k), thr / top, tol);
}

double tau_hat(const SortedSample& sample, std::size_t k, double alpha) {
  check_k(sample, k);
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  return kernel::tau_hat(sample.threshold(k), sample.threshold(k) / sample.max(), sample.size(), k, alpha);
}

double d_hat(const SortedSample& sample, std::size_t k, double alpha) {
  check_k(sample, k);
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  return kernel::d_hat(sample.threshold(k) / sample.max(), sample.size(), k, alpha);
}

double d_hat_admissible(const SortedSample& sample, std::size_t k, double alpha) {
  return std::max(d_hat(sample, k, alpha), 0.0);
}

double quantile_trunc(const SortedSample& sample, std::size_t k, double p, double d, double alpha) {
  check_k(sample, k);
  check_p(p);
  return kernel::quantile_trunc(sample.threshold(k), sample.size(), k, p, d, alpha);
}

double quantile_light(const SortedSample& sample, std::size_t k, double p, double alpha) {
  check_k(sample, k);
  check_p(p);
  return kernel::quantile_light(sample.threshold(k), sample.size(), k, p, alpha);
}

double quantile_weissman(const SortedSample& sample, std::size_t k, double p) {
  check_p(p);
  return kernel::quantile_weissman(sample.threshold(k), sample.size(), k, p, hill(sample, k));
}

Endpoint endpoint_hat(const SortedSample& sample, std::size_t k, double d, double alpha) {
  check_k(sample, k);
  return kernel::endpoint(sample.threshold(k), sample.max(), sample.size(), k, d, alpha);
}

MomFit mom_fit(const SortedSample& sample, std::size_t k) {
  check_k(sample, k);
  const double thr = sample.threshold(k);
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    const double l = std::log(sample.top(j) / thr);
    s1 += l;
    s2 += l * l;
  }
  MomFit fit;
  fit.k = k;
  fit.m1 = s1 / static_cast<double>(k);
  fit.m2 = s2 / static_cast<double>(k);
  if (!(fit.m2 > 0.0) || !(fit.m1 * fit.m1 < fit.m2)) {
    fail(ErrorCode::DegenerateMoments, "log-excesses are constant at k = " + std::to_string(k));
  }
  fit.xi_minus = 1.0 - 0.5 / (1.0 - fit.m1 * fit.m1 / fit.m2);
  fit.xi_mom = fit.m1 + fit.xi_minus;
  return fit;
}

double mom_quantile(const SortedSample& sample, std::size_t k, double p) {
  check_p(p);
  const MomFit fit = mom_fit(sample, k);
  return kernel::mom_quantile(sample.threshold(k), sample.size(), fit, p);
}

Endpoint mom_endpoint(const SortedSample& sample, std::size_t k) {
  const MomFit fit = mom_fit(sample, k);
  return kernel::mom_endpoint(sample.threshold(k), sample.max(), fit);
}

}  // namespace trunctail
