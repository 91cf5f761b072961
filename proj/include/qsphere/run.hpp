#pragma once

// Executes a parsed config: runs the requested computation, writes the
// CSV/JSON outputs under deterministic names, returns a one-line summary.

#include <string>
#include <vector>

#include "qsphere/config.hpp"

namespace qsphere {

struct RunResult {
    std::string summary;
    std::vector<std::string> files;
};

RunResult run(const RunConfig& cfg);

// pinned deterministic generator for generic on-surface initial states
struct SplitMix64 {
    std::uint64_t s;
    explicit SplitMix64(std::uint64_t seed) : s(seed) {}
    std::uint64_t next();
    double uniform(); // [0, 1)
};

ParticleState random_surface_state(SplitMix64& rng, const SurfaceParams& p);

} // namespace qsphere
