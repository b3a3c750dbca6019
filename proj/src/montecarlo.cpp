#include "trunctail/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "trunctail/fit_path.hpp"
#include "trunctail/hypothesis_tests.hpp"
#include "trunctail/numeric_format.hpp"

namespace trunctail {

namespace {

constexpr double kTestLevel = 0.05;

struct Accumulator {
  std::size_t count = 0;
  std::size_t failures = 0;
  std::size_t p_count = 0;
  double sum = 0.0;
  double sum_sq_err = 0.0;
  double sum_p = 0.0;
};

double truth_for(Estimator e, double alpha, double quantile, double endpoint) {
  switch (e) {
    case Estimator::AlphaTrunc:
    case Estimator::HillInverse: return alpha;
    case Estimator::Mom: return 1.0 / alpha;
    case Estimator::QTrunc:
    case Estimator::QWeissman:
    case Estimator::QMom: return quantile;
    case Estimator::EndpointTrunc:
    case Estimator::EndpointMom: return endpoint;
    case Estimator::TestTA:
    case Estimator::TestTB: return std::nan("");
  }
  return std::nan("");
}

CellValue value_of(double v) { return {v, std::nullopt, std::nullopt}; }
CellValue error_of(ErrorCode c) { return {std::nullopt, std::nullopt, c}; }

CellValue endpoint_cell(const Endpoint& ep) {
  return ep.is_finite() ? value_of(ep.value()) : error_of(ErrorCode::InfiniteEndpoint);
}

template <class F>
CellValue test_cell(F&& run) {
  try {
    const TestOutcome t = run();
    return {t.statistic, t.p_value, std::nullopt};
  } catch (const Error& e) {
    return error_of(e.code());
  }
}

CellValue cell_for(Estimator est, const PathEntry& e, const SortedSample& sample) {
  switch (est) {
    case Estimator::AlphaTrunc:
      return e.fit ? value_of(e.fit->alpha_trunc) : error_of(*e.fit_error);
    case Estimator::HillInverse:
      return e.hill > 0.0 ? value_of(1.0 / e.hill) : error_of(ErrorCode::ZeroHill);
    case Estimator::Mom:
      return e.mom ? value_of(e.mom->xi_mom) : error_of(*e.mom_error);
    case Estimator::QTrunc:
      if (!e.fit) return error_of(*e.fit_error);
      return e.fit->q_trunc ? value_of(*e.fit->q_trunc) : error_of(*e.fit->q_error);
    case Estimator::QWeissman:
      return value_of(e.q_weissman);
    case Estimator::QMom:
      return e.q_mom ? value_of(*e.q_mom) : error_of(*e.mom_error);
    case Estimator::EndpointTrunc:
      return e.fit ? endpoint_cell(e.fit->endpoint) : error_of(*e.fit_error);
    case Estimator::EndpointMom:
      return e.endpoint_mom ? endpoint_cell(*e.endpoint_mom) : error_of(*e.mom_error);
    case Estimator::TestTA:
      return test_cell([&] { return test_ta(sample, e.k, kTestLevel); });
    case Estimator::TestTB:
      return test_cell([&] { return test_tb(sample, e.k, kTestLevel); });
  }
  return error_of(ErrorCode::InvalidArgument);
}

class Aggregator {
 public:
  explicit Aggregator(const SimConfig& c)
      : config_(c), acc_(c.estimators.size(), std::vector<Accumulator>(c.k_grid.size())) {
    alpha_ = tail_index(c.model);
    quantile_ = upper_quantile(c.model, c.p_target);
    endpoint_ = truncation_point(c.model);
  }

  void add(const ReplicationResult& r) {
    for (std::size_t ei = 0; ei < acc_.size(); ++ei) {
      const double truth = truth_for(config_.estimators[ei], alpha_, quantile_, endpoint_);
      for (std::size_t ki = 0; ki < acc_[ei].size(); ++ki) {
        const CellValue& cell = r.cells[ei][ki];
        Accumulator& a = acc_[ei][ki];
        if (!cell.value) {
          ++a.failures;
          continue;
        }
        ++a.count;
        a.sum += *cell.value;
        if (std::isfinite(truth)) {
          const double err = *cell.value - truth;
          a.sum_sq_err += err * err;
        }
        if (cell.p_value) {
          ++a.p_count;
          a.sum_p += *cell.p_value;
        }
      }
    }
  }

  SimSummary finish() const {
    SimSummary s;
    s.model_spec = format_model(config_.model);
    if (const auto* t = std::get_if<TruncatedModel>(&config_.model)) {
      s.base_spec = format_model(t->base());
      s.t_spec = t->level() ? "Tq=" + format_double(*t->level()) : "T=" + format_double(t->T());
    } else {
      s.base_spec = s.model_spec;
      s.t_spec = "inf";
    }
    s.n = config_.n;
    s.runs = config_.runs;
    s.p_target = config_.p_target;
    s.seed = config_.seed;
    s.true_alpha = alpha_;
    s.true_quantile = quantile_;
    s.true_endpoint = endpoint_;
    for (std::size_t ei = 0; ei < acc_.size(); ++ei) {
      const Estimator est = config_.estimators[ei];
      const double truth = truth_for(est, alpha_, quantile_, endpoint_);
      for (std::size_t ki = 0; ki < acc_[ei].size(); ++ki) {
        const Accumulator& a = acc_[ei][ki];
        SummaryRow row;
        row.estimator = est;
        row.k = config_.k_grid[ki];
        row.failures = a.failures;
        if (a.count > 0) {
          const double c = static_cast<double>(a.count);
          row.mean = a.sum / c;
          if (std::isfinite(truth)) row.rmse = std::sqrt(a.sum_sq_err / c);
        }
        if (a.p_count > 0) row.mean_p = a.sum_p / static_cast<double>(a.p_count);
        s.rows.push_back(row);
      }
    }
    return s;
  }

 private:
  const SimConfig& config_;
  std::vector<std::vector<Accumulator>> acc_;
  double alpha_ = 0.0;
  double quantile_ = 0.0;
  double endpoint_ = 0.0;
};

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::ConfigError, what); }

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    config_error(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::AlphaTrunc: return "alpha_trunc";
    case Estimator::HillInverse: return "hill_inverse";
    case Estimator::Mom: return "mom";
    case Estimator::QTrunc: return "q_trunc";
    case Estimator::QWeissman: return "q_weissman";
    case Estimator::QMom: return "q_mom";
    case Estimator::EndpointTrunc: return "endpoint_trunc";
    case Estimator::EndpointMom: return "endpoint_mom";
    case Estimator::TestTA: return "test_ta";
    case Estimator::TestTB: return "test_tb";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  name = trim(name);
  for (Estimator e : kAllEstimators) {
    if (to_string(e) == name) return e;
  }
  config_error("unknown estimator '" + std::string(name) + "'");
}

std::vector<std::size_t> default_k_grid(std::size_t n) {
  std::vector<std::size_t> grid;
  for (std::size_t k = 10; n >= 20 && k <= n - 10; k += 5) grid.push_back(k);
  return grid;
}

SimConfig validated(SimConfig c) {
  if (c.n < 2) config_error("n must be at least 2");
  if (c.runs < 1) config_error("runs must be at least 1");
  if (!(c.p_target > 0.0 && c.p_target < 1.0)) config_error("p must lie in (0, 1)");
  if (!(c.tol > 0.0)) config_error("tol must be positive");
  if (c.k_grid.empty()) c.k_grid = default_k_grid(c.n);
  if (c.k_grid.empty()) config_error("empty k grid (default grid needs n >= 20)");
  std::sort(c.k_grid.begin(), c.k_grid.end());
  c.k_grid.erase(std::unique(c.k_grid.begin(), c.k_grid.end()), c.k_grid.end());
  for (std::size_t k : c.k_grid) {
    if (k < 1 || k > c.n - 1) {
      config_error("k = " + std::to_string(k) + " outside [1, n-1] for n = " + std::to_string(c.n));
    }
  }
  if (c.estimators.empty()) config_error("no estimators enabled");
  return c;
}

std::vector<Estimator> parse_estimators(std::string_view text) {
  text = trim(text);
  if (text == "all") return {kAllEstimators.begin(), kAllEstimators.end()};
  std::vector<Estimator> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    out.push_back(parse_estimator(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::size_t> parse_k_grid(std::string_view text) {
  text = trim(text);
  if (text == "default") return {};
  std::vector<std::size_t> grid;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::uint64_t> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find(':', start);
      parts.push_back(parse_u64("k_grid", text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) config_error("k_grid range must be a:b or a:b:step");
    const std::uint64_t step = parts.size() == 3 ? parts[2] : 1;
    if (step == 0 || parts[0] > parts[1]) config_error("k_grid range must be increasing with a positive step");
    for (std::uint64_t k = parts[0]; k <= parts[1]; k += step) grid.push_back(k);
    return grid;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    grid.push_back(parse_u64("k_grid", text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return grid;
}

SimConfig parse_sim_config(std::istream& in) {
  SimConfig c;
  std::string raw;
  std::size_t line_no = 0;
  bool have_model = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    try {
      if (key == "model") {
        c.model = parse_model(value);
        have_model = true;
      } else if (key == "n") {
        c.n = parse_u64(key, value);
      } else if (key == "runs") {
        c.runs = parse_u64(key, value);
      } else if (key == "k_grid") {
        c.k_grid = parse_k_grid(value);
      } else if (key == "p") {
        const auto p = parse_double(value);
        if (!p) config_error("p: invalid number '" + std::string(value) + "'");
        c.p_target = *p;
      } else if (key == "seed") {
        c.seed = parse_u64(key, value);
      } else if (key == "estimators") {
        c.estimators = parse_estimators(value);
      } else if (key == "d_raw") {
        if (value == "true" || value == "1") c.use_raw_d = true;
        else if (value == "false" || value == "0") c.use_raw_d = false;
        else config_error("d_raw: expected true or false");
      } else {
        config_error("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      fail(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_model) config_error("missing required key 'model'");
  return c;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
  return parse_sim_config(in);
}

SortedSample replication_sample(const SimConfig& config, std::size_t r) {
  Rng rng = Rng::stream(config.seed, r);
  return sample(config.model, config.n, rng);
}

ReplicationResult evaluate_replication(const SimConfig& config, const SortedSample& sample, std::size_t r) {
  ReplicationResult res;
  res.replication = r;
  res.cells.assign(config.estimators.size(), std::vector<CellValue>(config.k_grid.size()));
  const FitOptions options{config.tol, config.use_raw_d};
  for (std::size_t ki = 0; ki < config.k_grid.size(); ++ki) {
    const PathEntry entry = fit_at(sample, config.k_grid[ki], config.p_target, options);
    for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
      res.cells[ei][ki] = cell_for(config.estimators[ei], entry, sample);
    }
  }
  return res;
}

const SummaryRow* SimSummary::find(Estimator e, std::size_t k) const {
  for (const auto& row : rows) {
    if (row.estimator == e && row.k == k) return &row;
  }
  return nullptr;
}

SimSummary run_simulation_serial(const SimConfig& raw) {
  const SimConfig config = validated(raw);
  Aggregator agg(config);
  for (std::size_t r = 0; r < config.runs; ++r) {
    agg.add(evaluate_replication(config, replication_sample(config, r), r));
  }
  return agg.finish();
}

SimSummary run_simulation(const SimConfig& raw) {
  const SimConfig config = validated(raw);
  std::vector<ReplicationResult> results(config.runs);
  std::exception_ptr error;
  const auto runs = static_cast<long long>(config.runs);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < runs; ++i) {
    const auto r = static_cast<std::size_t>(i);
    try {
      results[r] = evaluate_replication(config, replication_sample(config, r), r);
    } catch (...) {
#pragma omp critical(trunctail_mc_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  // fixed-order reduction keeps the sums independent of the schedule
  Aggregator agg(config);
  for (const auto& r : results) agg.add(r);
  return agg.finish();
}

std::vector<SimConfig> paper_grid_configs(std::uint64_t base_seed, std::size_t runs) {
  const std::array<BaseModel, 3> bases = {ParetoModel(0.5), ParetoModel(2.0), BurrModel(2.0, -1.0)};
  const std::array<std::optional<double>, 3> levels = {0.90, 0.99, std::nullopt};
  std::vector<SimConfig> configs;
  std::uint64_t cell = 0;
  for (const auto& base : bases) {
    for (const auto& level : levels) {
      SimConfig c;
      if (level) {
        c.model = TruncatedModel::at_level(base, *level);
      } else {
        c.model = std::visit([](const auto& b) -> TailModel { return b; }, base);
      }
      c.n = 400;
      c.runs = runs;
      c.p_target = 0.002;
      Rng seeder = Rng::stream(base_seed, cell++);
      c.seed = seeder();
      configs.push_back(validated(std::move(c)));
    }
  }
  return configs;
}

std::vector<SimSummary> replicate_paper_grid(std::uint64_t base_seed, std::size_t runs) {
  std::vector<SimSummary> out;
  for (const auto& c : paper_grid_configs(base_seed, runs)) out.push_back(run_simulation(c));
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SimSummary>& summaries) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << "model,T_spec,estimator,k,mean,rmse,mean_p,failures\n";
  for (const auto& s : summaries) {
    for (const auto& row : s.rows) {
      out << s.base_spec << ',' << s.t_spec << ',' << to_string(row.estimator) << ',' << row.k << ','
          << opt(row.mean) << ',' << opt(row.rmse) << ',' << opt(row.mean_p) << ',' << row.failures << '\n';
    }
  }
}

void write_summary_json(std::ostream& out, const std::vector<SimSummary>& summaries) {
  using json = nlohmann::ordered_json;
  auto num = [](double v) -> json {
    if (std::isinf(v)) return format_double(v);
    return v;
  };
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json arr = json::array();
  for (const auto& s : summaries) {
    json rows = json::array();
    for (const auto& row : s.rows) {
      rows.push_back({{"estimator", std::string(to_string(row.estimator))},
                      {"k", row.k},
                      {"mean", opt(row.mean)},
                      {"rmse", opt(row.rmse)},
                      {"mean_p", opt(row.mean_p)},
                      {"failures", row.failures}});
    }
    arr.push_back({{"model", s.base_spec},
                   {"T_spec", s.t_spec},
                   {"model_spec", s.model_spec},
                   {"n", s.n},
                   {"runs", s.runs},
                   {"p", s.p_target},
                   {"seed", s.seed},
                   {"truth", {{"alpha", num(s.true_alpha)}, {"quantile", num(s.true_quantile)}, {"T", num(s.true_endpoint)}}},
                   {"rows", std::move(rows)}});
  }
  out << json{{"summaries", std::move(arr)}}.dump(2) << '\n';
}

}  // namespace trunctail
