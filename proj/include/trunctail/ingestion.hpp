#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "trunctail/sorted_sample.hpp"

namespace trunctail {

struct DatasetSpec {
  std::filesystem::path path;
  /// Header name, or a 1-based field number written in digits. Defaults to
  /// the first field.
  std::optional<std::string> column;
  char delimiter = ',';
  /// Keep only values >= this threshold.
  std::optional<double> min_threshold;
};

/// Reads observations: one value per line or a delimited table with an
/// optional header. Blank and `#` lines are skipped. Throws IoError,
/// ParseError (with line numbers) or InvalidArgument (< 2 values kept).
SortedSample load(const DatasetSpec& spec);
SortedSample load(std::istream& in, const DatasetSpec& spec);

/// One value per line, shortest round-trip formatting.
void write_sample(std::ostream& out, const SortedSample& sample);

}  // namespace trunctail
