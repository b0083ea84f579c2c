#include "wag/text.hpp"

#include <cctype>

namespace wag {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string collapse(std::string_view s, bool strip_punct) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (strip_punct && std::ispunct(uc)) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

}  // namespace

std::string normalize_name(std::string_view s) { return collapse(s, false); }

std::string normalize_text(std::string_view s) { return collapse(s, true); }

std::string slugify(std::string_view s) {
  std::string out = normalize_name(s);
  for (char& c : out)
    if (c == ' ') c = '-';
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed ^ fnv1a(tag);
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace wag
