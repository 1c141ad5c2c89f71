#pragma once

#include <cstdint>

namespace ousem {

/// Deterministic counter-based stream generator (splitmix64 core with
/// Box-Muller normals). Substreams keyed by (seed, stream) are independent
/// and reproducible regardless of evaluation order, so per-sample streams
/// can run in parallel.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    double uniform(); ///< strictly inside (0, 1)
    double normal();  ///< standard normal

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace ousem
