#include "wag/dates.hpp"

#include <chrono>
#include <cstdio>

#include "wag/error.hpp"

namespace wag {

namespace chr = std::chrono;

Date date_from_string(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
    throw ArgumentError("malformed date: '" + std::string(iso) + "' (expected YYYY-MM-DD)");
  auto digits = [&](int from, int len) {
    int v = 0;
    for (int i = from; i < from + len; ++i) {
      char c = iso[static_cast<size_t>(i)];
      if (c < '0' || c > '9')
        throw ArgumentError("malformed date: '" + std::string(iso) + "' (expected YYYY-MM-DD)");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  int y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                          chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok())
    throw ArgumentError("invalid calendar date: '" + std::string(iso) + "'");
  auto sd = chr::sys_days{ymd};
  return Date{static_cast<std::int32_t>(sd.time_since_epoch().count())};
}

std::string to_string(Date d) {
  chr::sys_days sd{chr::days{d.days}};
  chr::year_month_day ymd{sd};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace wag
