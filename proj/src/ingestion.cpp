#include "trunctail/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "trunctail/error.hpp"
#include "trunctail/numeric_format.hpp"

namespace trunctail {

namespace {

constexpr std::size_t kMaxReportedErrors = 10;

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::string_view unquote(std::string_view field) {
  field = trim(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
  return trim(field);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

SortedSample load(std::istream& in, const DatasetSpec& spec) {
  if (spec.min_threshold && !(*spec.min_threshold > 0.0 && std::isfinite(*spec.min_threshold))) {
    fail(ErrorCode::InvalidArgument, "min_threshold must be positive and finite");
  }
  const bool named = spec.column && !all_digits(*spec.column);
  std::size_t index = 0;
  if (spec.column && !named) {
    index = std::stoul(*spec.column);
    if (index == 0) fail(ErrorCode::ParseError, "column numbers are 1-based");
    --index;
  }

  std::vector<double> values;
  std::vector<std::string> errors;
  std::size_t errors_total = 0;
  auto report = [&](std::size_t line_no, const std::string& what) {
    ++errors_total;
    if (errors.size() < kMaxReportedErrors) errors.push_back("line " + std::to_string(line_no) + ": " + what);
  };

  bool first_content = true;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, spec.delimiter);

    if (first_content) {
      first_content = false;
      if (named) {
        const auto it = std::find_if(fields.begin(), fields.end(),
                                     [&](std::string_view f) { return unquote(f) == *spec.column; });
        if (it == fields.end()) {
          fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": no column named '" + *spec.column + "'");
        }
        index = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
      if (index < fields.size() && !parse_double(unquote(fields[index]))) continue;  // header row
    }

    if (index >= fields.size()) {
      report(line_no, "missing field " + std::to_string(index + 1));
      continue;
    }
    const std::string_view token = unquote(fields[index]);
    const auto value = parse_double(token);
    if (!value) {
      report(line_no, "invalid number '" + std::string(token) + "'");
    } else if (!std::isfinite(*value) || *value <= 0.0) {
      report(line_no, "non-positive or non-finite value '" + std::string(token) + "'");
    } else if (!spec.min_threshold || *value >= *spec.min_threshold) {
      values.push_back(*value);
    }
  }

  if (errors_total > 0) {
    std::string msg = std::to_string(errors_total) + " invalid line(s) in '" + spec.path.string() + "'";
    for (const auto& e : errors) msg += "\n  " + e;
    if (errors_total > errors.size()) msg += "\n  ...";
    fail(ErrorCode::ParseError, msg);
  }
  if (values.size() < 2) {
    fail(ErrorCode::InvalidArgument,
         "need at least 2 observations after filtering, got " + std::to_string(values.size()));
  }
  return SortedSample(std::move(values));
}

SortedSample load(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + spec.path.string() + "'");
  return load(in, spec);
}

void write_sample(std::ostream& out, const SortedSample& sample) {
  for (double v : sample.values()) out << format_double(v) << '\n';
}

}  // namespace trunctail
