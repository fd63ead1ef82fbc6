#pragma once

#include <cstdint>

namespace fsi {

// Counter-based generator (splitmix64 finalizer). Stateless: value i of
// stream `key` is hash(key, i), so draws are reproducible across platforms
// and independent of evaluation order.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Uniform double in [0,1) from (key, index).
inline double rng_u01(uint64_t key, uint64_t index) {
    return static_cast<double>(splitmix64(key ^ splitmix64(index)) >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1,1).
inline double rng_sym(uint64_t key, uint64_t index) {
    return 2.0 * rng_u01(key, index) - 1.0;
}

}  // namespace fsi
