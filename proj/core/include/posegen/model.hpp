#pragma once

// Core value types shared by every stage of dataset generation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace posegen {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Maps any finite angle onto [-pi, pi). Throws std::invalid_argument for
/// NaN or infinite input.
double wrap_angle(double theta);

/// Heading on the grid, stored as a quarter-turn count in {-2, -1, 0, 1}.
/// -2 is -pi (facing -x), 0 faces +x, 1 faces +y.
struct GridPose {
  std::int64_t x = 0;
  std::int64_t y = 0;
  int quarter_turns = 0;

  double heading() const { return quarter_turns * kHalfPi; }
  // Unit displacement taken when stepping forward with this heading.
  std::int64_t step_dx() const;
  std::int64_t step_dy() const;

  friend bool operator==(const GridPose&, const GridPose&) = default;
};

/// Normalizes a quarter-turn count into {-2, -1, 0, 1}.
int normalize_quarter_turns(int q);

/// Pose in metric units after the d/s rescaling.
struct ScaledPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  friend bool operator==(const ScaledPose&, const ScaledPose&) = default;
};

ScaledPose to_scaled(const GridPose& pose, double scale);

/// Symmetric 3x3 information matrix over (x, y, theta), stored as the
/// upper triangle in row-major order, which is also the g2o layout.
struct InformationMatrix {
  double i11 = 1.0, i12 = 0.0, i13 = 0.0;
  double i22 = 1.0, i23 = 0.0;
  double i33 = 1.0;

  static InformationMatrix diagonal(double d1, double d2, double d3) {
    return {d1, 0.0, 0.0, d2, 0.0, d3};
  }
  double operator()(int row, int col) const;
  /// True when every leading principal minor is strictly positive.
  bool is_positive_definite() const;

  friend bool operator==(const InformationMatrix&, const InformationMatrix&) = default;
};

struct RelativeMeasurement {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;  // wrapped into [-pi, pi)
  InformationMatrix info;

  friend bool operator==(const RelativeMeasurement&, const RelativeMeasurement&) = default;
};

enum class EdgeKind { odometry, intra_lc };

/// Constraint between two poses of the same agent. The measurement is the
/// pose of `to_id` expressed in the frame of `from_id`.
struct Edge {
  std::size_t from_id = 0;
  std::size_t to_id = 0;
  RelativeMeasurement meas;
  EdgeKind kind = EdgeKind::odometry;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Loop closure between two agents; agent_a < agent_b and the measurement
/// is expressed in the frame of (agent_a, node_a).
struct InterAgentEdge {
  std::size_t agent_a = 0;
  std::size_t node_a = 0;
  std::size_t agent_b = 0;
  std::size_t node_b = 0;
  RelativeMeasurement meas;

  friend bool operator==(const InterAgentEdge&, const InterAgentEdge&) = default;
};

struct AgentGraph {
  // Empty only for graphs parsed without a ground-truth file.
  std::vector<GridPose> ground_truth;
  std::vector<Edge> odometry;
  std::vector<Edge> intra_lc;
  // Vertex initial guesses (dead-reckoned odometry), in metric units.
  std::vector<ScaledPose> estimate;

  std::size_t node_count() const {
    return ground_truth.empty() ? estimate.size() : ground_truth.size();
  }

  friend bool operator==(const AgentGraph&, const AgentGraph&) = default;
};

struct MultiGraph {
  std::vector<AgentGraph> agents;
  std::vector<InterAgentEdge> inter_lc;
  double scale = 1.0;  // meters per grid unit

  friend bool operator==(const MultiGraph&, const MultiGraph&) = default;
};

enum class InfoMode { exact, diagonal };

std::string to_string(InfoMode mode);
std::optional<InfoMode> parse_info_mode(const std::string& text);

struct LoopClosureParams {
  double prob_at_zero = 0.5;
  double radius = 1.0;  // grid units
  double sigma_pos = 0.023;
  double sigma_ang = 0.023;
  double decay_gain = 5.0;

  friend bool operator==(const LoopClosureParams&, const LoopClosureParams&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

struct GenerationConfig {
  std::size_t n_agents = 2;
  std::size_t n_steps = 1000;
  std::size_t steps_between_turns = 4;
  // true permits 180 degree turns (turn draw over {-2..1}), false restricts
  // the draw to {-1, 0, 1}.
  bool allow_reverse = false;
  // Grid block length d in meters; unset means d = steps_between_turns so
  // that one grid step is one meter.
  std::optional<double> block_length;
  std::vector<GridPose> initial_poses;  // empty, or one per agent
  double odom_sigma_pos = 0.023;
  double odom_sigma_ang = 0.023;
  LoopClosureParams intra_lc;
  LoopClosureParams inter_lc;
  bool align = true;
  InfoMode info_mode = InfoMode::exact;
  std::uint64_t master_seed = kDefaultSeed;

  /// n_d in the turn distribution U{-2 + n_d, 1}.
  int reverse_exclusion() const { return allow_reverse ? 0 : 1; }
  /// Meters per grid unit, d / s.
  double scale() const;
  GridPose initial_pose(std::size_t agent) const;

  friend bool operator==(const GenerationConfig&, const GenerationConfig&) = default;
};

/// Returns every violated bound; empty means the config is valid.
std::vector<std::string> validate_config(const GenerationConfig& cfg);

}  // namespace posegen
