#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "kacres/resolution.hpp"

namespace kacres::service {

inline constexpr int kMemoCacheVersion = 1;

/// JSON-lines memo file. Line 1 is a header
///   {"format":"kacres-memo","version":1}
/// and every further line holds one normalized diagram:
///   {"mu":[0,1],"depth":3,"terms":[[{"lambda":[0,1],"multiplicity":1}],...]}
struct CacheLoadStats {
    std::size_t loaded = 0;
    std::size_t skipped = 0;
};

/// Missing file is not an error. Unreadable or inconsistent lines are
/// skipped with a warning on `warn`.
CacheLoadStats load_memo_cache(Resolver& resolver, const std::filesystem::path& path, std::ostream& warn);

/// Writes the whole memo atomically (temporary file plus rename).
void save_memo_cache(const Resolver& resolver, const std::filesystem::path& path);

/// Explicit path wins; otherwise KACRES_CACHE if set and nonempty.
std::optional<std::string> memo_cache_path(const std::optional<std::string>& explicit_path);

} // namespace kacres::service
