#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wag {

// Lowercase, trim, collapse internal whitespace runs to a single space.
// Basis for duplicate detection of metric/node names.
std::string normalize_name(std::string_view s);

// normalize_name plus punctuation removed; basis for embeddings and
// query matching.
std::string normalize_text(std::string_view s);

// Normalized name with spaces replaced by '-'. Stable node ids.
std::string slugify(std::string_view s);

// FNV-1a over bytes. Deterministic across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s);

// Derive an independent child seed from a parent seed and a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);

}  // namespace wag
