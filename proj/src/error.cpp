#include "trunctail/error.hpp"

namespace trunctail {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::NoRoot: return "no_root";
    case ErrorCode::NonConvergence: return "non_convergence";
    case ErrorCode::TiedExtremes: return "tied_extremes";
    case ErrorCode::InvalidOdds: return "invalid_odds";
    case ErrorCode::InfiniteEndpoint: return "infinite_endpoint";
    case ErrorCode::DegenerateMoments: return "degenerate_moments";
    case ErrorCode::ZeroHill: return "zero_hill";
    case ErrorCode::DegenerateE: return "degenerate_e";
    case ErrorCode::NonpositiveDelta: return "nonpositive_delta";
    case ErrorCode::NoCandidate: return "no_candidate";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::ConfigError: return "config_error";
  }
  return "unknown";
}

}  // namespace trunctail
