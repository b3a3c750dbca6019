#include "trunctail/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "trunctail/error.hpp"
#include "trunctail/numeric_format.hpp"

namespace trunctail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    fail(ErrorCode::OutOfRange, "tail probability must lie in (0, 1], got " + format_double(p));
  }
}

// --- parent families -------------------------------------------------------

double base_sf(const ParetoModel& m, double x) {
  return x <= m.tau ? 1.0 : std::pow(m.tau / x, m.alpha);
}
double base_cdf(const ParetoModel& m, double x) {
  return x <= m.tau ? 0.0 : -std::expm1(m.alpha * std::log(m.tau / x));
}
double base_quantile(const ParetoModel& m, double p) {
  return m.tau * std::pow(p, -1.0 / m.alpha);
}

// log(1 + x^(-rho*alpha)) / rho is log of the Burr survival function.
double burr_log_sf(const BurrModel& m, double x) {
  return std::log1p(std::exp(-m.rho * m.alpha * std::log(x))) / m.rho;
}
double base_sf(const BurrModel& m, double x) { return std::exp(burr_log_sf(m, x)); }
double base_cdf(const BurrModel& m, double x) { return -std::expm1(burr_log_sf(m, x)); }
double base_quantile(const BurrModel& m, double p) {
  if (p == 1.0) return 0.0;
  return std::pow(std::expm1(m.rho * std::log(p)), -1.0 / (m.rho * m.alpha));
}

double base_sf(const BaseModel& m, double x) {
  return std::visit([x](const auto& b) { return base_sf(b, x); }, m);
}
double base_cdf(const BaseModel& m, double x) {
  return std::visit([x](const auto& b) { return base_cdf(b, x); }, m);
}
double base_quantile(const BaseModel& m, double p) {
  return std::visit([p](const auto& b) { return base_quantile(b, p); }, m);
}
double base_lower(const BaseModel& m) {
  return std::visit(overloaded{[](const ParetoModel& b) { return b.tau; },
                               [](const BurrModel&) { return 0.0; }},
                    m);
}
double base_alpha(const BaseModel& m) {
  return std::visit([](const auto& b) { return b.alpha; }, m);
}

void check_x(double x) {
  if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "x must be positive, got " + format_double(x));
}

}  // namespace

ParetoModel::ParetoModel(double a, double t) : alpha(a), tau(t) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "pareto alpha must be > 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorCode::InvalidArgument, "pareto tau must be > 0");
}

BurrModel::BurrModel(double a, double r) : alpha(a), rho(r) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "burr alpha must be > 0");
  if (!(rho < 0.0) || !std::isfinite(rho)) fail(ErrorCode::InvalidArgument, "burr rho must be < 0");
}

TruncatedModel::TruncatedModel(BaseModel base, double T, std::optional<double> level)
    : base_(std::move(base)), T_(T), level_(level) {
  if (!std::isfinite(T_) || !(T_ > base_lower(base_))) {
    fail(ErrorCode::InvalidArgument,
         "truncation point must be finite and above the lower support bound, got " + format_double(T_));
  }
  cdf_T_ = base_cdf(base_, T_);
  sf_T_ = base_sf(base_, T_);
  if (!(cdf_T_ > 0.0 && cdf_T_ < 1.0)) {
    fail(ErrorCode::InvalidArgument, "truncation point leaves no mass on one side");
  }
}

TruncatedModel TruncatedModel::at_value(BaseModel base, double T) {
  return TruncatedModel(std::move(base), T, std::nullopt);
}

TruncatedModel TruncatedModel::at_level(BaseModel base, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    fail(ErrorCode::InvalidArgument, "truncation level must lie in (0, 1), got " + format_double(level));
  }
  const double T = base_quantile(base, 1.0 - level);
  return TruncatedModel(std::move(base), T, level);
}

double cdf(const TailModel& model, double x) {
  check_x(x);
  return std::visit(
      overloaded{[x](const TruncatedModel& m) {
                   if (x > m.T()) {
                     fail(ErrorCode::OutOfRange, "x = " + format_double(x) + " lies above the truncation point");
                   }
                   if (x == m.T()) return 1.0;
                   return base_cdf(m.base(), x) / m.parent_cdf_at_T();
                 },
                 [x](const auto& m) { return base_cdf(m, x); }},
      model);
}

double survival(const TailModel& model, double x) {
  check_x(x);
  return std::visit(
      overloaded{[x](const TruncatedModel& m) {
                   if (x > m.T()) {
                     fail(ErrorCode::OutOfRange, "x = " + format_double(x) + " lies above the truncation point");
                   }
                   const double s = (base_sf(m.base(), x) - m.parent_sf_at_T()) / m.parent_cdf_at_T();
                   return std::max(s, 0.0);
                 },
                 [x](const auto& m) { return base_sf(m, x); }},
      model);
}

double upper_quantile(const TailModel& model, double p) {
  check_probability(p);
  return std::visit(
      overloaded{[p](const TruncatedModel& m) {
                   // F_W(x) = (1 - p) F_W(T)  <=>  right-tail mass sf(T) + p F(T)
                   const double parent_p = m.parent_sf_at_T() + p * m.parent_cdf_at_T();
                   return std::min(base_quantile(m.base(), std::min(parent_p, 1.0)), m.T());
                 },
                 [p](const auto& m) { return base_quantile(m, p); }},
      model);
}

SortedSample sample(const TailModel& model, std::size_t n, Rng& rng) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "sample size must be at least 1");
  std::vector<double> draws(n);
  for (auto& x : draws) x = upper_quantile(model, rng.uniform_open());
  return SortedSample(std::move(draws));
}

double true_odds(const TailModel& model) {
  if (const auto* t = std::get_if<TruncatedModel>(&model)) {
    return t->parent_sf_at_T() / t->parent_cdf_at_T();
  }
  return 0.0;
}

double tail_index(const TailModel& model) {
  return std::visit(overloaded{[](const TruncatedModel& m) { return base_alpha(m.base()); },
                               [](const auto& m) { return m.alpha; }},
                    model);
}

double truncation_point(const TailModel& model) {
  if (const auto* t = std::get_if<TruncatedModel>(&model)) return t->T();
  return kInf;
}

double lower_bound(const TailModel& model) {
  return std::visit(overloaded{[](const TruncatedModel& m) { return base_lower(m.base()); },
                               [](const ParetoModel& m) { return m.tau; },
                               [](const BurrModel&) { return 0.0; }},
                    model);
}

bool is_truncated(const TailModel& model) { return std::holds_alternative<TruncatedModel>(model); }

// --- model grammar ----------------------------------------------------------

namespace {

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        text_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
  }

  TailModel parse() {
    TailModel m = model();
    if (pos_ != text_.size()) error("trailing input '" + text_.substr(pos_) + "'");
    return m;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "model spec: " + what);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    if (pos_ >= text_.size()) error(std::string("expected '") + c + "' at end of input");
    if (text_[pos_] != c) {
      error(std::string("expected '") + c + "' but found '" + text_.substr(pos_, 8) + "'");
    }
    ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
    const std::string token = text_.substr(start, pos_ - start);
    const auto v = parse_double(token);
    if (!v) error("invalid number '" + token + "'");
    return *v;
  }

  // key=value pairs up to the closing parenthesis
  std::vector<std::pair<std::string, double>> arguments() {
    std::vector<std::pair<std::string, double>> args;
    do {
      std::string key = identifier();
      if (key.empty()) error("expected parameter name at '" + text_.substr(pos_, 8) + "'");
      expect('=');
      args.emplace_back(std::move(key), number());
    } while (accept(','));
    expect(')');
    return args;
  }

  BaseModel base_model() {
    const std::size_t at = pos_;
    const std::string name = identifier();
    if (name == "pareto" || name == "burr") {
      expect('(');
      auto args = arguments();
      std::optional<double> alpha, tau, rho;
      for (const auto& [key, value] : args) {
        if (key == "alpha") alpha = value;
        else if (key == "tau" && name == "pareto") tau = value;
        else if (key == "rho" && name == "burr") rho = value;
        else error("unknown parameter '" + key + "' for " + name);
      }
      if (!alpha) error("missing alpha for " + name);
      try {
        if (name == "pareto") return ParetoModel(*alpha, tau.value_or(1.0));
        if (!rho) error("missing rho for burr");
        return BurrModel(*alpha, *rho);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        error(e.what());
      }
    }
    error("unknown model '" + (name.empty() ? text_.substr(at, 8) : name) + "'");
  }

  TailModel model() {
    const std::size_t save = pos_;
    const std::string name = identifier();
    if (name != "trunc") {
      pos_ = save;
      return std::visit([](auto&& b) -> TailModel { return b; }, base_model());
    }
    expect('(');
    BaseModel base = base_model();
    expect(',');
    const std::string key = identifier();
    expect('=');
    const double value = number();
    expect(')');
    try {
      if (key == "t") {
        if (std::isinf(value) && value > 0) return std::visit([](auto&& b) -> TailModel { return b; }, base);
        return TruncatedModel::at_value(std::move(base), value);
      }
      if (key == "tq") return TruncatedModel::at_level(std::move(base), value);
    } catch (const Error& e) {
      error(e.what());
    }
    error("unknown truncation parameter '" + key + "' (expected T or Tq)");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

TailModel parse_model(std::string_view text) { return ModelParser(text).parse(); }

std::string format_model(const BaseModel& model) {
  return std::visit(overloaded{[](const ParetoModel& m) {
                                 std::string s = "pareto(alpha=" + format_double(m.alpha);
                                 if (m.tau != 1.0) s += ",tau=" + format_double(m.tau);
                                 return s + ")";
                               },
                               [](const BurrModel& m) {
                                 return "burr(alpha=" + format_double(m.alpha) + ",rho=" + format_double(m.rho) + ")";
                               }},
                    model);
}

std::string format_model(const TailModel& model) {
  return std::visit(overloaded{[](const TruncatedModel& m) {
                                 const std::string t = m.level() ? "Tq=" + format_double(*m.level())
                                                                 : "T=" + format_double(m.T());
                                 return "trunc(" + format_model(m.base()) + "," + t + ")";
                               },
                               [](const auto& m) { return format_model(BaseModel(m)); }},
                    model);
}

}  // namespace trunctail
