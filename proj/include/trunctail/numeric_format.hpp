#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace trunctail {

/// Shortest decimal that round-trips to the same double; +inf is `inf`.
std::string format_double(double value);

/// Locale-independent parse of a whole token (surrounding blanks allowed).
/// Accepts scientific notation and `inf`; returns nullopt otherwise.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text) noexcept;

}  // namespace trunctail
