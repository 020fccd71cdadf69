#pragma once

// End-to-end dataset generation: walk, align, odometry, loop closures.

#include <vector>

#include "posegen/model.hpp"
#include "posegen/rng.hpp"
#include "posegen/walk.hpp"

namespace posegen {

RngStream walk_stream(std::uint64_t seed, std::size_t agent);
RngStream odometry_stream(std::uint64_t seed, std::size_t agent);

/// Odometry edges for a ground-truth trajectory (rescaled by `scale`), with
/// information matrices chosen by cfg.info_mode.
std::vector<Edge> odometry_edges(const Trajectory& traj, const GenerationConfig& cfg,
                                 double scale, RngStream& rng);

/// Full dataset. Throws ConfigError when validate_config() reports
/// violations. The result is a pure function of `cfg`; `threads` only
/// changes how the work is scheduled.
MultiGraph generate(const GenerationConfig& cfg, unsigned threads = 1);

}  // namespace posegen
