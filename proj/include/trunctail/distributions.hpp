#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "trunctail/rng.hpp"
#include "trunctail/sorted_sample.hpp"

namespace trunctail {

/// Strict Pareto: P(W > w) = (tau / w)^alpha for w >= tau.
struct ParetoModel {
  double alpha = 1.0;
  double tau = 1.0;

  ParetoModel() = default;
  ParetoModel(double alpha, double tau = 1.0);
};

/// Burr: F(x) = 1 - (1 + x^(-rho*alpha))^(1/rho), x > 0.
struct BurrModel {
  double alpha = 1.0;
  double rho = -1.0;

  BurrModel() = default;
  BurrModel(double alpha, double rho);
};

using BaseModel = std::variant<ParetoModel, BurrModel>;

/// Parent model W conditioned on W <= T.
class TruncatedModel {
 public:
  /// Truncate at the raw value T.
  static TruncatedModel at_value(BaseModel base, double T);
  /// Truncate at the parent quantile T = Q_W(level), level in (0, 1).
  static TruncatedModel at_level(BaseModel base, double level);

  const BaseModel& base() const noexcept { return base_; }
  double T() const noexcept { return T_; }
  std::optional<double> level() const noexcept { return level_; }
  /// F_W(T) and its complement, evaluated once at construction.
  double parent_cdf_at_T() const noexcept { return cdf_T_; }
  double parent_sf_at_T() const noexcept { return sf_T_; }

 private:
  TruncatedModel(BaseModel base, double T, std::optional<double> level);

  BaseModel base_;
  double T_;
  std::optional<double> level_;
  double cdf_T_;
  double sf_T_;
};

using TailModel = std::variant<ParetoModel, BurrModel, TruncatedModel>;

double cdf(const TailModel& model, double x);
/// Right-tail function 1 - F(x), evaluated without cancellation.
double survival(const TailModel& model, double x);
/// Q(1 - p): the value with right-tail mass p, for p in (0, 1].
double upper_quantile(const TailModel& model, double p);
/// n inverse-transform draws, sorted ascending.
SortedSample sample(const TailModel& model, std::size_t n, Rng& rng);
/// D_T = F_W(T)^-1 * (1 - F_W(T)); zero for models without truncation.
double true_odds(const TailModel& model);

double tail_index(const TailModel& model);
/// T for truncated models, +inf otherwise.
double truncation_point(const TailModel& model);
double lower_bound(const TailModel& model);
bool is_truncated(const TailModel& model);

/// Parses the model grammar:
///   pareto(alpha=A[,tau=T0])  burr(alpha=A,rho=R)
///   trunc(<base>,T=<value>)   trunc(<base>,Tq=<level>)
/// Case-insensitive; throws ParseError naming the offending token.
TailModel parse_model(std::string_view text);

/// Canonical spec string; parse_model(format_model(m)) reproduces m.
std::string format_model(const TailModel& model);
std::string format_model(const BaseModel& model);

}  // namespace trunctail
