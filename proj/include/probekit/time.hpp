#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace probekit {

// Seconds since the Unix epoch, UTC. The wire format and the sighting
// store work at this granularity.
using UnixTime = std::int64_t;

// Capture-record timestamp, microsecond precision.
struct Timestamp {
  std::int64_t sec = 0;
  std::uint32_t usec = 0;  // 0..999999

  UnixTime whole_seconds() const { return sec; }
  auto operator<=>(const Timestamp&) const = default;
};

// "YYYY-MM-DD HH:MM:SS", UTC.
std::string format_utc(UnixTime t);

// Strict inverse of format_utc; rejects anything else.
std::optional<UnixTime> parse_utc(std::string_view text);

}  // namespace probekit
