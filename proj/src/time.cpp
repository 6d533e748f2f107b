#include "probekit/time.hpp"

#include <chrono>
#include <cstdio>

namespace probekit {

std::string format_utc(UnixTime t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};
  char buf[48];  // output is always 19 chars; slack keeps -Wformat quiet
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02lld:%02lld:%02lld",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(hms.hours().count()),
                static_cast<long long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::optional<UnixTime> parse_utc(std::string_view text) {
  // Exactly "YYYY-MM-DD HH:MM:SS".
  if (text.size() != 19) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != ' ' || text[13] != ':' ||
      text[16] != ':') {
    return std::nullopt;
  }
  auto digits = [&](int pos, int len) -> int {
    int v = 0;
    for (int i = pos; i < pos + len; ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') return -1;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const int y = digits(0, 4);
  const int mo = digits(5, 2);
  const int d = digits(8, 2);
  const int h = digits(11, 2);
  const int mi = digits(14, 2);
  const int s = digits(17, 2);
  if (y < 0 || mo < 0 || d < 0 || h < 0 || mi < 0 || s < 0) return std::nullopt;
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  const sys_days day_point{ymd};
  return day_point.time_since_epoch().count() * UnixTime{86400} + h * 3600 +
         mi * 60 + s;
}

}  // namespace probekit
