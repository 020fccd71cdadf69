#pragma once

// Manhattan-world random walk and anchorpoint alignment.

#include <span>
#include <utility>
#include <vector>

#include "posegen/model.hpp"
#include "posegen/rng.hpp"

namespace posegen {

using Trajectory = std::vector<GridPose>;

/// Advances one step. A turn Theta ~ U{-2 + reverse_exclusion, 1} is drawn
/// only when step_index % steps_between_turns == 0; the pose then moves one
/// grid unit along the (possibly new) heading.
GridPose step(const GridPose& prev, std::size_t step_index, std::size_t steps_between_turns,
              int reverse_exclusion, RngStream& rng);

/// Same as step() but with the turn value supplied by the caller.
GridPose step_with_turn(const GridPose& prev, int turn);

/// N_steps + 1 poses starting at the agent's configured initial pose.
Trajectory generate_trajectory(std::size_t agent, const GenerationConfig& cfg, RngStream& rng);

/// Mean position of a trajectory. Throws std::invalid_argument when empty.
std::pair<double, double> anchorpoint(std::span<const GridPose> traj);

/// Integer translation that brings `traj` closest to `reference` in
/// anchorpoint (round half to even, computed in exact integer arithmetic).
std::pair<std::int64_t, std::int64_t> alignment_offset(std::span<const GridPose> reference,
                                                       std::span<const GridPose> traj);

/// Translates trajectories 1..n so their anchorpoints match trajectory 0 as
/// closely as the integer grid allows. Headings are untouched.
std::vector<Trajectory> align(std::vector<Trajectory> trajectories);

}  // namespace posegen
