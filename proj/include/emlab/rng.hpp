#pragma once

#include <cstdint>
#include <random>

namespace emlab {

// splitmix64 finalizer; used to derive well-separated stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4ecda82f2fa9cULL;
    return x ^ (x >> 31);
}

// One named stream per (master seed, realization id). Streams are
// independent of execution order, so parallel ensembles reproduce exactly.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::seed_seq seq{mix64(master_seed), mix64(master_seed ^ mix64(stream_id)), stream_id};
    return std::mt19937_64(seq);
}

}  // namespace emlab
