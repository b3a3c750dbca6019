#include "trunctail/fit_path.hpp"

#include <algorithm>
#include <string>

namespace trunctail {

TailFit tail_fit(const SortedSample& sample, std::size_t k, double p, const FitOptions& options) {
  check_k(sample, k);
  TailFit fit;
  fit.k = k;
  fit.hill = hill(sample, k);
  fit.ratio = ratio_stat(sample, k);
  fit.alpha_trunc = alpha_trunc(sample, k, options.tol);
  fit.d_raw = d_hat(sample, k, fit.alpha_trunc);
  fit.d_admissible = std::max(fit.d_raw, 0.0);
  fit.tau_hat = tau_hat(sample, k, fit.alpha_trunc);
  const double d = options.use_raw_d ? fit.d_raw : fit.d_admissible;
  try {
    fit.q_trunc = quantile_trunc(sample, k, p, d, fit.alpha_trunc);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidOdds) throw;
    fit.q_error = e.code();
  }
  fit.endpoint = endpoint_hat(sample, k, d, fit.alpha_trunc);
  return fit;
}

PathEntry fit_at(const SortedSample& sample, std::size_t k, double p, const FitOptions& options) {
  check_k(sample, k);
  PathEntry e;
  e.k = k;
  e.hill = hill(sample, k);
  e.ratio = ratio_stat(sample, k);
  e.q_weissman = quantile_weissman(sample, k, p);
  try {
    e.fit = tail_fit(sample, k, p, options);
  } catch (const Error& err) {
    e.fit_error = err.code();
  }
  try {
    e.mom = mom_fit(sample, k);
    e.q_mom = kernel::mom_quantile(sample.threshold(k), sample.size(), *e.mom, p);
    e.endpoint_mom = kernel::mom_endpoint(sample.threshold(k), sample.max(), *e.mom);
  } catch (const Error& err) {
    e.mom_error = err.code();
  }
  return e;
}

namespace {

void check_range(const SortedSample& sample, std::size_t k_first, std::size_t k_last, double p) {
  if (k_first > k_last) fail(ErrorCode::OutOfRange, "empty k range");
  check_k(sample, k_first);
  check_k(sample, k_last);
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "p must lie in (0, 1)");
}

}  // namespace

std::vector<PathEntry> fit_path_serial(const SortedSample& sample, std::size_t k_first, std::size_t k_last,
                                       double p, const FitOptions& options) {
  check_range(sample, k_first, k_last, p);
  std::vector<PathEntry> out;
  out.reserve(k_last - k_first + 1);
  for (std::size_t k = k_first; k <= k_last; ++k) out.push_back(fit_at(sample, k, p, options));
  return out;
}

std::vector<PathEntry> fit_path(const SortedSample& sample, std::size_t k_first, std::size_t k_last, double p,
                                const FitOptions& options) {
  check_range(sample, k_first, k_last, p);
  const auto count = static_cast<long long>(k_last - k_first + 1);
  std::vector<PathEntry> out(static_cast<std::size_t>(count));
  // cost grows with k; dynamic scheduling keeps threads balanced
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = fit_at(sample, k_first + static_cast<std::size_t>(i), p, options);
  }
  return out;
}

}  // namespace trunctail
