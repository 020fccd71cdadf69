#pragma once

#include <span>
#include <vector>

#include "posegen/model.hpp"

namespace posegen {

/// Composes each relative measurement onto the previous pose, starting from
/// `initial`. Returns odometry.size() + 1 poses.
std::vector<ScaledPose> dead_reckon(std::span<const RelativeMeasurement> odometry,
                                    const ScaledPose& initial);

/// Convenience overload taking the odometry edges of an agent.
std::vector<ScaledPose> dead_reckon(std::span<const Edge> odometry, const ScaledPose& initial);

/// Unaligned mean translational error (1/N) sum |p_est - p_true|. Throws
/// std::invalid_argument on length mismatch.
double mean_ape_translation(std::span<const ScaledPose> estimate,
                            std::span<const ScaledPose> truth);

struct DatasetStats {
  std::vector<std::size_t> nodes_per_agent;
  std::size_t odometry_edges = 0;
  std::size_t intra_lc_count = 0;
  std::size_t inter_lc_count = 0;
  std::size_t total_constraints = 0;

  std::size_t loop_closures() const { return intra_lc_count + inter_lc_count; }
  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

DatasetStats dataset_stats(const MultiGraph& multi);

}  // namespace posegen
