#pragma once

#include <cstdint>
#include <string_view>

namespace dyson {

// FNV-1a 64-bit, used for parameter digests in manifests and the result cache.
// The byte and string forms have distinct names so that a (char*, hash) call
// can never resolve to (data, length).
inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n,
                                   std::uint64_t h = 1469598103934665603ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 1469598103934665603ULL) {
  return fnv1a64_bytes(s.data(), s.size(), h);
}

}  // namespace dyson
