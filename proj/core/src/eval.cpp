#include "posegen/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace posegen {

std::vector<ScaledPose> dead_reckon(std::span<const RelativeMeasurement> odometry,
                                    const ScaledPose& initial) {
  std::vector<ScaledPose> poses;
  poses.reserve(odometry.size() + 1);
  poses.push_back(initial);
  for (const auto& m : odometry) {
    const ScaledPose& p = poses.back();
    const double c = std::cos(p.heading);
    const double s = std::sin(p.heading);
    poses.push_back({p.x + c * m.dx - s * m.dy, p.y + s * m.dx + c * m.dy,
                     wrap_angle(p.heading + m.dtheta)});
  }
  return poses;
}

std::vector<ScaledPose> dead_reckon(std::span<const Edge> odometry, const ScaledPose& initial) {
  std::vector<RelativeMeasurement> meas;
  meas.reserve(odometry.size());
  for (const auto& e : odometry) meas.push_back(e.meas);
  return dead_reckon(std::span<const RelativeMeasurement>(meas), initial);
}

double mean_ape_translation(std::span<const ScaledPose> estimate,
                            std::span<const ScaledPose> truth) {
  if (estimate.size() != truth.size()) {
    throw std::invalid_argument("mean_ape_translation: length mismatch (" +
                                std::to_string(estimate.size()) + " vs " +
                                std::to_string(truth.size()) + ")");
  }
  if (estimate.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    sum += std::hypot(estimate[i].x - truth[i].x, estimate[i].y - truth[i].y);
  }
  return sum / static_cast<double>(estimate.size());
}

DatasetStats dataset_stats(const MultiGraph& multi) {
  DatasetStats s;
  for (const auto& agent : multi.agents) {
    s.nodes_per_agent.push_back(agent.node_count());
    s.odometry_edges += agent.odometry.size();
    s.intra_lc_count += agent.intra_lc.size();
  }
  s.inter_lc_count = multi.inter_lc.size();
  s.total_constraints = s.odometry_edges + s.intra_lc_count + s.inter_lc_count;
  return s;
}

}  // namespace posegen
