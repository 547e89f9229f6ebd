#pragma once

#include <cstdint>
#include <random>

namespace convexlab {

/// Selects the OpenMP kernel or the serial reference loop. Both produce
/// identical results for a fixed seed; the serial path exists for testing.
enum class Exec { serial, parallel };

/// Deterministic per-task generator: task `index` of a run seeded with `seed`
/// always sees the same stream regardless of thread schedule.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

}  // namespace convexlab
