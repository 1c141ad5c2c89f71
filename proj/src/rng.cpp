#include "ousem/rng.hpp"

#include <cmath>

namespace ousem {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + kGolden) ^ mix(stream * 0xD2B74407B1CE6E93ULL + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t CounterRng::next_u64() {
    state_ += kGolden;
    return mix(state_);
}

double CounterRng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

} // namespace ousem
