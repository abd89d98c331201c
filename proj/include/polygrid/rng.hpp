#ifndef POLYGRID_RNG_HPP
#define POLYGRID_RNG_HPP

#include <cstdint>

namespace polygrid {

// SplitMix64. Every pseudo-random choice in the library flows from a caller
// seed through this generator, so identical seeds give identical runs on any
// platform. (Documented in the README; do not swap the algorithm.)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound), bound > 0. Rejection-free modulo is fine here:
    // bounds are tiny relative to 2^64, bias is irrelevant for genericity.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    // Uniform in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in {-bound..bound} \ {0}.
    std::int64_t nonzero(std::int64_t bound) {
        std::int64_t v = range(1, 2 * bound);
        return v <= bound ? v : bound - v; // 1..bound or -1..-bound
    }

private:
    std::uint64_t state_;
};

// Independent substream: mixes a label into a seed. Used to give each
// elimination retry / linear form / fixture its own deterministic stream.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t label) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + label * 0x9e3779b97f4a7c15ULL));
    return g.next();
}

} // namespace polygrid

#endif
