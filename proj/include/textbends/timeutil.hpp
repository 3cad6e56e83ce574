#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace textbends {

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t epoch_seconds);

/// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM:SS" and "YYYY-MM-DDTHH:MM:SS" with
/// an optional trailing "Z". Times are UTC.
std::optional<std::int64_t> parse_iso8601(std::string_view text);

}  // namespace textbends
