#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "trunctail/distributions.hpp"
#include "trunctail/error.hpp"
#include "trunctail/ingestion.hpp"

using namespace trunctail;

namespace {

SortedSample load_text(const std::string& text, DatasetSpec spec = {}) {
  std::istringstream in(text);
  return load(in, spec);
}

Error error_of(const std::string& text, DatasetSpec spec = {}) {
  try {
    load_text(text, spec);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorCode::InvalidArgument, "");
}

std::vector<double> as_vector(const SortedSample& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST_CASE("one value per line") {
  CHECK(as_vector(load_text("3\n1\n2\n")) == std::vector<double>{1, 2, 3});
  CHECK(as_vector(load_text("# comment\n\n  2.5e3 \r\n1E-2\n+7\n")) == std::vector<double>{0.01, 7, 2500});
  CHECK(as_vector(load_text("4\n4\n1\n")) == std::vector<double>{1, 4, 4});
}

TEST_CASE("delimited tables") {
  const std::string csv =
      "year,\"deaths\",place\n"
      "1900,1000,a\n"
      "1901,999,b\n"
      "1902,250000,c\n"
      "1903,\"1500\",d\n";
  DatasetSpec spec;
  spec.column = "deaths";
  spec.min_threshold = 1000.0;
  CHECK(as_vector(load_text(csv, spec)) == std::vector<double>{1000, 1500, 250000});

  spec.column = "2";
  CHECK(as_vector(load_text(csv, spec)) == std::vector<double>{1000, 1500, 250000});

  spec.column = "1";
  spec.min_threshold.reset();
  CHECK(as_vector(load_text(csv, spec)) == std::vector<double>{1900, 1901, 1902, 1903});

  DatasetSpec tab;
  tab.delimiter = '\t';
  tab.column = "2";
  CHECK(as_vector(load_text("1\t5\n2\t6\n", tab)) == std::vector<double>{5, 6});

  DatasetSpec first;
  CHECK(as_vector(load_text("value\n2\n3\n", first)) == std::vector<double>{2, 3});
}

TEST_CASE("errors") {
  SUBCASE("line numbers are reported") {
    const Error e = error_of("1\n2\nabc\n# skip\n-4\n0\n5\n");
    CHECK(e.code() == ErrorCode::ParseError);
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("line 5") != std::string::npos);
    CHECK(msg.find("line 6") != std::string::npos);
    CHECK(msg.find("line 7") == std::string::npos);
  }
  SUBCASE("missing column") {
    DatasetSpec spec;
    spec.column = "deaths";
    const Error e = error_of("year,count\n1,2\n", spec);
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("deaths") != std::string::npos);

    spec.column = "3";
    CHECK(error_of("1,2\n3,4\n", spec).code() == ErrorCode::ParseError);
    spec.column = "0";
    CHECK(error_of("1,2\n3,4\n", spec).code() == ErrorCode::ParseError);
  }
  SUBCASE("too few values") {
    CHECK(error_of("5\n").code() == ErrorCode::InvalidArgument);
    CHECK(error_of("# nothing\n").code() == ErrorCode::InvalidArgument);
    DatasetSpec spec;
    spec.min_threshold = 100.0;
    CHECK(error_of("5\n6\n200\n", spec).code() == ErrorCode::InvalidArgument);
    spec.min_threshold = -1.0;
    CHECK(error_of("5\n6\n200\n", spec).code() == ErrorCode::InvalidArgument);
  }
  SUBCASE("unreadable file") {
    DatasetSpec spec;
    spec.path = "/nonexistent/trunctail/data.txt";
    try {
      load(spec);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
  }
}

TEST_CASE("round trip and permutation invariance") {
  Rng rng(12);
  const auto s = sample(TruncatedModel::at_level(ParetoModel(0.5), 0.99), 1000, rng);
  std::ostringstream out;
  write_sample(out, s);
  CHECK(load_text(out.str()) == s);

  std::vector<std::string> lines;
  std::istringstream in(out.str());
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::mt19937 gen(3);
  std::shuffle(lines.begin(), lines.end(), gen);
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  CHECK(load_text(shuffled) == s);

  const auto path = std::filesystem::temp_directory_path() / "trunctail_ingestion_roundtrip.txt";
  {
    std::ofstream f(path);
    write_sample(f, s);
  }
  DatasetSpec spec;
  spec.path = path;
  CHECK(load(spec) == s);
  CHECK(load(spec) == load(spec));
  std::filesystem::remove(path);
}
