#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "trunctail/error.hpp"
#include "trunctail/estimators.hpp"
#include "trunctail/hypothesis_tests.hpp"
#include "trunctail/montecarlo.hpp"
#include "trunctail/parallel.hpp"

using namespace trunctail;
using doctest::Approx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

SimConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sim_config(in);
}

bool same_rows(const SimSummary& a, const SimSummary& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.estimator != y.estimator || x.k != y.k || x.mean != y.mean || x.rmse != y.rmse ||
        x.mean_p != y.mean_p || x.failures != y.failures) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("estimator names") {
  for (Estimator e : kAllEstimators) CHECK(parse_estimator(to_string(e)) == e);
  CHECK(code_of([] { parse_estimator("hill"); }) == ErrorCode::ConfigError);
  CHECK(parse_estimators(" all ").size() == kAllEstimators.size());
  CHECK(parse_estimators("q_mom,test_tb") == std::vector<Estimator>{Estimator::QMom, Estimator::TestTB});
  CHECK(code_of([] { parse_estimators("q_mom,,test_tb"); }) == ErrorCode::ConfigError);
}

TEST_CASE("k grids") {
  const auto d = default_k_grid(400);
  CHECK(d.size() == 77);
  CHECK(d.front() == 10);
  CHECK(d.back() == 390);
  CHECK(parse_k_grid("default").empty());
  CHECK(parse_k_grid("10:20:5") == std::vector<std::size_t>{10, 15, 20});
  CHECK(parse_k_grid(" 3:5 ") == std::vector<std::size_t>{3, 4, 5});
  CHECK(parse_k_grid("200") == std::vector<std::size_t>{200});
  CHECK(parse_k_grid("30,10,20") == std::vector<std::size_t>{30, 10, 20});
  CHECK(code_of([] { parse_k_grid("5:1"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_k_grid("1:5:0"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_k_grid("1:2:3:4"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_k_grid("ten"); }) == ErrorCode::ConfigError);
}

TEST_CASE("config validation") {
  SimConfig c;
  const SimConfig v = validated(c);
  CHECK(v.k_grid == default_k_grid(400));

  c.k_grid = {30, 10, 30, 20};
  CHECK(validated(c).k_grid == std::vector<std::size_t>{10, 20, 30});

  auto bad = [](auto mutate) {
    SimConfig x;
    mutate(x);
    return code_of([&] { validated(x); });
  };
  CHECK(bad([](SimConfig& x) { x.n = 1; }) == ErrorCode::ConfigError);
  CHECK(bad([](SimConfig& x) { x.runs = 0; }) == ErrorCode::ConfigError);
  CHECK(bad([](SimConfig& x) { x.p_target = 0.0; }) == ErrorCode::ConfigError);
  CHECK(bad([](SimConfig& x) { x.k_grid = {400}; }) == ErrorCode::ConfigError);
  CHECK(bad([](SimConfig& x) { x.k_grid = {0}; }) == ErrorCode::ConfigError);
  CHECK(bad([](SimConfig& x) { x.estimators.clear(); }) == ErrorCode::ConfigError);
  CHECK(bad([](SimConfig& x) { x.n = 15; }) == ErrorCode::ConfigError);
}

TEST_CASE("config files") {
  const SimConfig c = parse(
      "# Pareto cell\n"
      "model = trunc(pareto(alpha=2),Tq=0.9)\n"
      "n = 300\n"
      "\n"
      "runs=50\n"
      "k_grid = 20:100:40\n"
      "p = 0.01\n"
      "seed = 77\n"
      "estimators = alpha_trunc, test_ta\n"
      "d_raw = true\n");
  CHECK(format_model(c.model) == "trunc(pareto(alpha=2),Tq=0.9)");
  CHECK(c.n == 300);
  CHECK(c.runs == 50);
  CHECK(c.k_grid == std::vector<std::size_t>{20, 60, 100});
  CHECK(c.p_target == 0.01);
  CHECK(c.seed == 77);
  CHECK(c.estimators == std::vector<Estimator>{Estimator::AlphaTrunc, Estimator::TestTA});
  CHECK(c.use_raw_d);

  try {
    parse("n = 10\nwidth = 3\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("width") != std::string::npos);
  }
  CHECK(code_of([] { parse("n = -3\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("model = gauss(alpha=1)\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("just text\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("d_raw = maybe\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_sim_config("/nonexistent/sim.cfg"); }) == ErrorCode::IoError);
}

TEST_CASE("one replication equals direct estimator calls") {
  SimConfig c;
  c.model = TruncatedModel::at_level(ParetoModel(2.0), 0.9);
  c.runs = 1;
  c.seed = 2718;
  c.k_grid = {50, 200};
  const SimSummary s = run_simulation(validated(c));
  const SortedSample x = replication_sample(validated(c), 0);
  const double truth_q = upper_quantile(c.model, c.p_target);
  CHECK(s.true_quantile == truth_q);
  CHECK(s.true_alpha == 2.0);
  CHECK(s.true_endpoint == Approx(std::sqrt(10.0)).epsilon(1e-14));
  CHECK(s.t_spec == "Tq=0.9");
  CHECK(s.base_spec == "pareto(alpha=2)");

  for (std::size_t k : c.k_grid) {
    const double a = alpha_trunc(x, k);
    const SummaryRow* r = s.find(Estimator::AlphaTrunc, k);
    REQUIRE(r);
    CHECK(*r->mean == a);
    CHECK(*r->rmse == Approx(std::abs(a - 2.0)).epsilon(1e-15));
    CHECK(r->failures == 0);
    CHECK_FALSE(r->mean_p);

    CHECK(*s.find(Estimator::HillInverse, k)->mean == 1.0 / hill(x, k));
    CHECK(*s.find(Estimator::Mom, k)->mean == mom_fit(x, k).xi_mom);
    CHECK(*s.find(Estimator::QTrunc, k)->mean == quantile_trunc(x, k, c.p_target, d_hat_admissible(x, k, a), a));
    CHECK(*s.find(Estimator::QWeissman, k)->rmse ==
          Approx(std::abs(quantile_weissman(x, k, c.p_target) - truth_q)).epsilon(1e-14));

    const TestOutcome ta = test_ta(x, k, 0.05);
    CHECK(*s.find(Estimator::TestTA, k)->mean == ta.statistic);
    CHECK(*s.find(Estimator::TestTA, k)->mean_p == ta.p_value);
    CHECK_FALSE(s.find(Estimator::TestTA, k)->rmse);
    CHECK(*s.find(Estimator::TestTB, k)->mean_p == test_tb(x, k, 0.05).p_value);
  }
  CHECK(s.find(Estimator::AlphaTrunc, 51) == nullptr);
}

TEST_CASE("untruncated Pareto: alpha_trunc estimates the tail index") {
  SimConfig c;
  c.model = ParetoModel(2.0);
  c.runs = 500;
  c.k_grid = {100};
  c.seed = 11;
  c = validated(c);
  double sum = 0.0;
  for (std::size_t r = 0; r < c.runs; ++r) sum += 1.0 / alpha_trunc(replication_sample(c, r), 100);
  CHECK(std::abs(sum / 500.0 - 0.5) < 0.1);
}

TEST_CASE("summaries are bit-identical across schedules") {
  SimConfig c;
  c.model = TruncatedModel::at_level(ParetoModel(0.5), 0.99);
  c.runs = 40;
  c.k_grid = parse_k_grid("10:390:20");
  c.seed = 5;
  const SimSummary ser = run_simulation_serial(c);
  const auto saved = thread_count();
  for (int t : {1, 2, 4}) {
    set_thread_count(t);
    CHECK(same_rows(run_simulation(c), ser));
  }
  set_thread_count(saved);

  for (const auto& r : ser.rows) {
    CHECK(r.failures <= c.runs);
    if (r.rmse) CHECK(*r.rmse >= 0.0);
  }
  c.seed = 6;
  CHECK_FALSE(same_rows(run_simulation(c), ser));
}

TEST_CASE("failures are counted") {
  SimConfig c;
  c.model = BurrModel(2.0, -1.0);
  c.runs = 30;
  c.k_grid = {10, 200, 390};
  c.estimators = {Estimator::EndpointTrunc, Estimator::QTrunc};
  const SimSummary s = run_simulation(c);
  CHECK(std::isinf(s.true_endpoint));
  for (const auto& r : s.rows) {
    if (r.estimator == Estimator::EndpointTrunc) {
      CHECK(r.failures <= 30);
      if (r.failures == 30) CHECK_FALSE(r.mean);
    }
  }
}

TEST_CASE("paper grid") {
  const auto cfgs = paper_grid_configs(1, 200);
  REQUIRE(cfgs.size() == 9);
  std::set<std::uint64_t> seeds;
  std::set<std::string> models;
  for (const auto& c : cfgs) {
    CHECK(c.n == 400);
    CHECK(c.runs == 200);
    CHECK(c.p_target == 0.002);
    seeds.insert(c.seed);
    models.insert(format_model(c.model));
  }
  CHECK(seeds.size() == 9);
  CHECK(models.count("trunc(pareto(alpha=0.5),Tq=0.99)") == 1);
  CHECK(models.count("burr(alpha=2,rho=-1)") == 1);
  CHECK(models.count("pareto(alpha=2)") == 1);
}

TEST_CASE("writers") {
  SimConfig a;
  a.model = TruncatedModel::at_level(ParetoModel(2.0), 0.9);
  a.runs = 5;
  a.k_grid = {20, 40};
  SimConfig b = a;
  b.model = ParetoModel(2.0);
  const std::vector<SimSummary> sums = {run_simulation(a), run_simulation(b)};

  std::ostringstream csv;
  write_summary_csv(csv, sums);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "model,T_spec,estimator,k,mean,rmse,mean_p,failures");
  std::size_t rows = 0;
  for (std::string l; std::getline(lines, l);) {
    ++rows;
    if (rows == 1) CHECK(l.rfind("pareto(alpha=2),Tq=0.9,alpha_trunc,20,", 0) == 0);
  }
  CHECK(rows == 2 * 10 * 2);

  std::ostringstream js;
  write_summary_json(js, sums);
  const auto doc = nlohmann::json::parse(js.str());
  REQUIRE(doc["summaries"].size() == 2);
  CHECK(doc["summaries"][1]["truth"]["T"] == "inf");
  CHECK(doc["summaries"][0]["truth"]["alpha"] == 2.0);
}
