#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace obfkit::util {

// splitmix64; used both as a seed mixer and to derive independent substreams.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic RNG with hand-rolled bounded draws so outputs are identical
// across standard libraries (std::uniform_int_distribution is not portable).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed)) {}

    uint64_t next_u64() {
        state_ = splitmix64(state_ + 0x2545f4914f6cdd1dULL);
        return state_;
    }

    // Uniform in [0, bound) via rejection sampling.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

    // Uniform in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double unit() {  // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(below(v.size()))];
    }

    // Derive an independent substream (e.g. per corpus entry).
    Rng fork(uint64_t stream) const {
        return Rng(splitmix64(state_ ^ splitmix64(stream)));
    }

private:
    uint64_t state_;
};

// Stable 64-bit hash for strings (FNV-1a); used for seed derivation from ids.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace obfkit::util
