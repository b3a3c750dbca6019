#include "trunctail/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "trunctail/error.hpp"
#include "trunctail/fit_path.hpp"
#include "trunctail/hypothesis_tests.hpp"
#include "trunctail/ingestion.hpp"
#include "trunctail/montecarlo.hpp"
#include "trunctail/numeric_format.hpp"
#include "trunctail/parallel.hpp"
#include "trunctail/qq.hpp"

namespace trunctail::cli {

namespace {

using Field = std::variant<std::monostate, double, std::size_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Field>> rows;
};

std::string csv_field(const Field& f) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, std::size_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      f);
}

nlohmann::ordered_json json_field(const Field& f) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else return v;
      },
      f);
}

void write_table(std::ostream& out, const Table& t, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_field(row[i]);
      arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

Field opt(const std::optional<double>& v) { return v ? Field(*v) : Field(); }
Field endpoint_field(const std::optional<Endpoint>& e) {
  return e ? Field(e->value_or_inf()) : Field();
}

std::string status_of(std::initializer_list<std::optional<ErrorCode>> codes) {
  std::string s;
  for (const auto& c : codes) {
    if (!c) continue;
    const std::string name(to_string(*c));
    if (s.find(name) != std::string::npos) continue;
    if (!s.empty()) s += ';';
    s += name;
  }
  return s.empty() ? "ok" : s;
}

struct InputOptions {
  std::string path;
  std::string column;
  char delimiter = ',';
  std::optional<double> min_threshold;

  SortedSample load_sample() const {
    DatasetSpec spec;
    spec.path = path;
    if (!column.empty()) spec.column = column;
    spec.delimiter = delimiter;
    spec.min_threshold = min_threshold;
    return load(spec);
  }
};

struct Common {
  InputOptions input;
  std::optional<std::size_t> k;
  std::string k_range;
  double p = 0.01;
  double level = 0.05;
  bool d_raw = false;
  double tol = kDefaultTol;
  std::string format = "csv";
  std::string output;

  std::pair<std::size_t, std::size_t> ks(const SortedSample& s) const {
    if (s.size() < 2) fail(ErrorCode::InvalidArgument, "need at least 2 observations");
    if (k) return {*k, *k};
    if (k_range.empty()) return {1, s.size() - 1};
    const auto colon = k_range.find(':');
    if (colon == std::string::npos) fail(ErrorCode::ParseError, "--k-range must be A:B");
    const auto a = parse_double(k_range.substr(0, colon));
    const auto b = parse_double(k_range.substr(colon + 1));
    if (!a || !b || *a < 1 || *b < *a || *a != std::floor(*a) || *b != std::floor(*b)) {
      fail(ErrorCode::ParseError, "--k-range must be A:B with integers 1 <= A <= B");
    }
    return {static_cast<std::size_t>(*a), static_cast<std::size_t>(*b)};
  }
};

void add_input(CLI::App* cmd, Common& c) {
  cmd->add_option("-i,--input", c.input.path, "Observation file (one value per line or delimited)")->required();
  cmd->add_option("--column", c.input.column, "Column header name or 1-based field number");
  cmd->add_option("--delimiter", c.input.delimiter, "Field delimiter");
  cmd->add_option("--min-threshold", c.input.min_threshold, "Keep only values >= this threshold");
}

void add_k(CLI::App* cmd, Common& c) {
  auto* k = cmd->add_option("-k,--k", c.k, "Single k");
  cmd->add_option("--k-range", c.k_range, "Inclusive k range A:B (default 1:n-1)")->excludes(k);
}

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", c.output, "Output path (default stdout)");
}

Table fit_table(const SortedSample& s, const Common& c) {
  const auto [k0, k1] = c.ks(s);
  Table t;
  t.columns = {"k",        "H",          "inv_H",         "alpha_trunc",  "d_raw",  "d_admissible", "tau_hat",
               "q_trunc",  "q_weissman", "q_mom",         "xi_mom",       "endpoint_trunc", "endpoint_mom", "status"};
  for (const auto& e : fit_path(s, k0, k1, c.p, FitOptions{c.tol, c.d_raw})) {
    const TailFit* f = e.fit ? &*e.fit : nullptr;
    t.rows.push_back({e.k,
                      e.hill,
                      e.hill > 0 ? Field(1.0 / e.hill) : Field(),
                      f ? Field(f->alpha_trunc) : Field(),
                      f ? Field(f->d_raw) : Field(),
                      f ? Field(f->d_admissible) : Field(),
                      f ? Field(f->tau_hat) : Field(),
                      f ? opt(f->q_trunc) : Field(),
                      e.q_weissman,
                      opt(e.q_mom),
                      e.mom ? Field(e.mom->xi_mom) : Field(),
                      f ? Field(f->endpoint.value_or_inf()) : Field(),
                      endpoint_field(e.endpoint_mom),
                      status_of({e.fit_error, f ? f->q_error : std::nullopt, e.mom_error})});
  }
  return t;
}

Table quantile_table(const SortedSample& s, const Common& c) {
  const auto [k0, k1] = c.ks(s);
  Table t;
  t.columns = {"k", "p", "q_trunc", "q_light", "q_weissman", "q_mom", "status"};
  for (const auto& e : fit_path(s, k0, k1, c.p, FitOptions{c.tol, c.d_raw})) {
    const TailFit* f = e.fit ? &*e.fit : nullptr;
    t.rows.push_back({e.k, c.p, f ? opt(f->q_trunc) : Field(),
                      f ? Field(quantile_light(s, e.k, c.p, f->alpha_trunc)) : Field(), e.q_weissman,
                      opt(e.q_mom), status_of({e.fit_error, f ? f->q_error : std::nullopt, e.mom_error})});
  }
  return t;
}

Table endpoint_table(const SortedSample& s, const Common& c) {
  const auto [k0, k1] = c.ks(s);
  Table t;
  t.columns = {"k", "endpoint_trunc", "endpoint_mom", "status"};
  for (const auto& e : fit_path(s, k0, k1, c.p, FitOptions{c.tol, c.d_raw})) {
    t.rows.push_back({e.k, e.fit ? Field(e.fit->endpoint.value_or_inf()) : Field(), endpoint_field(e.endpoint_mom),
                      status_of({e.fit_error, e.mom_error})});
  }
  return t;
}

Table test_table(const SortedSample& s, const Common& c) {
  const auto [k0, k1] = c.ks(s);
  check_k(s, k0);
  check_k(s, k1);
  Table t;
  t.columns = {"k", "ta_stat", "ta_p", "tb_stat", "tb_p", "ta_reject", "tb_reject", "status"};
  for (std::size_t k = k0; k <= k1; ++k) {
    std::optional<TestOutcome> ta, tb;
    std::optional<ErrorCode> ea, eb;
    try {
      ta = test_ta(s, k, c.level);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OutOfRange) throw;
      ea = e.code();
    }
    try {
      tb = test_tb(s, k, c.level);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OutOfRange) throw;
      eb = e.code();
    }
    t.rows.push_back({k, ta ? Field(ta->statistic) : Field(), ta ? Field(ta->p_value) : Field(),
                      tb ? Field(tb->statistic) : Field(), tb ? Field(tb->p_value) : Field(),
                      ta ? Field(ta->reject) : Field(), tb ? Field(tb->reject) : Field(), status_of({ea, eb})});
  }
  return t;
}

struct QQOptions {
  std::string kind = "pareto";
  std::size_t k_min = 11;
  std::size_t stride = 1;
  std::optional<std::size_t> k_star;
  std::optional<double> d;
};

void write_qq(std::ostream& out, const SortedSample& s, const QQOptions& q, const Common& c) {
  QQPlot plot;
  if (q.kind == "pareto") {
    plot = pareto_qq(s);
  } else if (q.d) {
    plot = tpa_qq(s, *q.d);
  } else {
    const std::size_t k = q.k_star ? *q.k_star : select_k_star(s, {q.k_min, q.stride, c.tol}).k_star;
    plot = tpa_qq_at(s, k, c.tol);
  }
  if (c.format == "json") {
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : plot.points) pts.push_back({p.x, p.y});
    nlohmann::ordered_json doc = {{"kind", q.kind},
                          {"k_star", plot.k_star ? nlohmann::ordered_json(*plot.k_star) : nlohmann::ordered_json(nullptr)},
                          {"d_used", plot.d_used},
                          {"correlation", plot.correlation ? nlohmann::ordered_json(*plot.correlation) : nlohmann::ordered_json(nullptr)},
                          {"points", std::move(pts)}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# kind=" << q.kind << " k_star=" << (plot.k_star ? std::to_string(*plot.k_star) : "")
      << " d_used=" << format_double(plot.d_used)
      << " correlation=" << (plot.correlation ? format_double(*plot.correlation) : "") << '\n';
  out << "x,y\n";
  for (const auto& p : plot.points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

struct SimOptions {
  std::string config;
  bool paper_grid = false;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::string> model;
  std::optional<std::string> k_grid;
  std::optional<double> p;
  std::optional<std::string> estimators;
  bool d_raw = false;
  int threads = 0;
};

std::vector<SimSummary> simulate(const SimOptions& o) {
  if (o.threads > 0) set_thread_count(o.threads);
  if (o.paper_grid) {
    std::vector<SimSummary> out;
    for (auto cfg : paper_grid_configs(o.seed.value_or(1), o.runs.value_or(200))) {
      if (o.k_grid) cfg.k_grid = parse_k_grid(*o.k_grid);
      if (o.estimators) cfg.estimators = parse_estimators(*o.estimators);
      cfg.use_raw_d = o.d_raw;
      out.push_back(run_simulation(cfg));
    }
    return out;
  }
  SimConfig cfg;
  if (!o.config.empty()) {
    cfg = load_sim_config(o.config);
  } else if (!o.model) {
    fail(ErrorCode::ConfigError, "simulate needs --config, --model or --paper-grid");
  }
  if (o.model) cfg.model = parse_model(*o.model);
  if (o.runs) cfg.runs = *o.runs;
  if (o.seed) cfg.seed = *o.seed;
  if (o.n) cfg.n = *o.n;
  if (o.k_grid) cfg.k_grid = parse_k_grid(*o.k_grid);
  if (o.p) cfg.p_target = *o.p;
  if (o.d_raw) cfg.use_raw_d = true;
  if (o.estimators) cfg.estimators = parse_estimators(*o.estimators);
  return {run_simulation(cfg)};
}

bool is_usage_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::ConfigError:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NoCandidate:
    case ErrorCode::NoRoot:
    case ErrorCode::TiedExtremes: return true;
    default: return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tail-index, odds-ratio, quantile and endpoint estimation for truncated Pareto-type tails"};
  app.name("trunctail");
  app.require_subcommand(1);

  Common common;
  QQOptions qq;
  SimOptions sim;

  auto* fit = app.add_subcommand("fit", "Per-k estimator table");
  add_input(fit, common);
  add_k(fit, common);
  fit->add_option("--p", common.p, "Tail probability for quantile columns")->check(CLI::Range(0.0, 1.0));
  fit->add_flag("--d-raw", common.d_raw, "Use the raw odds estimate instead of max(D, 0)");
  fit->add_option("--tol", common.tol, "Solver tolerance");
  add_output(fit, common);

  auto* test = app.add_subcommand("test", "Truncation tests T_A and T_B per k");
  add_input(test, common);
  add_k(test, common);
  test->add_option("--level", common.level, "Test level")->check(CLI::Range(0.0, 1.0));
  add_output(test, common);

  auto* qqcmd = app.add_subcommand("qq", "Pareto or truncated-Pareto QQ-plot data");
  add_input(qqcmd, common);
  qqcmd->add_option("--kind", qq.kind, "Plot kind")->check(CLI::IsMember({"pareto", "tpa"}));
  qqcmd->add_option("--k-min", qq.k_min, "Smallest k* candidate");
  qqcmd->add_option("--stride", qq.stride, "Evaluate every stride-th k* candidate");
  auto* kstar = qqcmd->add_option("--k-star", qq.k_star, "Use this anchor instead of searching");
  qqcmd->add_option("--d", qq.d, "Force the odds value (tpa kind)")->excludes(kstar);
  add_output(qqcmd, common);

  auto* quant = app.add_subcommand("quantile", "Extreme quantile estimates per k");
  add_input(quant, common);
  add_k(quant, common);
  quant->add_option("--p", common.p, "Tail probability")->required()->check(CLI::Range(0.0, 1.0));
  quant->add_flag("--d-raw", common.d_raw, "Use the raw odds estimate instead of max(D, 0)");
  add_output(quant, common);

  auto* endp = app.add_subcommand("endpoint", "Endpoint estimates per k");
  add_input(endp, common);
  add_k(endp, common);
  endp->add_flag("--d-raw", common.d_raw, "Use the raw odds estimate instead of max(D, 0)");
  add_output(endp, common);

  auto* simcmd = app.add_subcommand("simulate", "Monte Carlo study");
  simcmd->add_option("--config", sim.config, "Key-value config file");
  simcmd->add_flag("--paper-grid", sim.paper_grid, "Run the 3x3 model grid (n=400, p=0.002)");
  simcmd->add_option("--runs", sim.runs, "Replications")->check(CLI::PositiveNumber);
  simcmd->add_option("--seed", sim.seed, "Master seed");
  simcmd->add_option("--n", sim.n, "Sample size");
  simcmd->add_option("--model", sim.model, "Model spec, e.g. trunc(pareto(alpha=2),Tq=0.9)");
  simcmd->add_option("--k-grid", sim.k_grid, "k grid: default, a:b[:step] or comma list");
  simcmd->add_option("--p", sim.p, "Target tail probability");
  simcmd->add_option("--estimators", sim.estimators, "Comma list of estimators or 'all'");
  simcmd->add_flag("--d-raw", sim.d_raw, "Use the raw odds estimate for quantiles and endpoints");
  simcmd->add_option("--threads", sim.threads, "OpenMP threads (0 = default)");
  add_output(simcmd, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::ostringstream buffer;
    if (*simcmd) {
      const auto summaries = simulate(sim);
      if (common.format == "json") write_summary_json(buffer, summaries);
      else write_summary_csv(buffer, summaries);
    } else {
      const SortedSample sample = common.input.load_sample();
      if (*fit) write_table(buffer, fit_table(sample, common), common.format);
      else if (*test) write_table(buffer, test_table(sample, common), common.format);
      else if (*qqcmd) write_qq(buffer, sample, qq, common);
      else if (*quant) write_table(buffer, quantile_table(sample, common), common.format);
      else if (*endp) write_table(buffer, endpoint_table(sample, common), common.format);
    }
    if (common.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(common.output, std::ios::binary);
      if (!file) fail(ErrorCode::IoError, "cannot write '" + common.output + "'");
      file << buffer.str();
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace trunctail::cli
