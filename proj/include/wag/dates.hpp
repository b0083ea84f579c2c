#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wag {

// A calendar day, stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;
  auto operator<=>(const Date&) const = default;
};

// Parse "YYYY-MM-DD". Throws ArgumentError on anything else.
Date date_from_string(std::string_view iso);

std::string to_string(Date d);

inline Date operator+(Date d, int n) { return Date{d.days + n}; }
inline Date operator-(Date d, int n) { return Date{d.days - n}; }
inline int operator-(Date a, Date b) { return a.days - b.days; }

}  // namespace wag
