#pragma once

#include <cstdint>
#include <string_view>

namespace majinlink {

/// Seed for shingle hashing. Changing it invalidates every stored shingle
/// set and signature.
inline constexpr std::uint64_t kShingleHashSeed = 0x6d616a696e6c6e6bULL;

/// FNV-1a over the bytes, seeded through the offset basis, followed by a
/// splitmix64 finalizer. Stable across platforms.
std::uint64_t hash64(std::string_view bytes, std::uint64_t seed = kShingleHashSeed);

}  // namespace majinlink
