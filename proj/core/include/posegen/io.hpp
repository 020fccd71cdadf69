#pragma once

// Serialization: .g2o (per agent and concatenated), multi-g2o directory
// trees, .tum ground truth, and JSON generation configs.
//
// multi-g2o layout:
//
//   root/
//     inter_agent_lc.dat        A1 K1 A2 K2 dx dy dyaw I11 I12 I13 I22 I23 I33
//     agent1/posegraph.g2o
//     agent1/agent1_GT.tum
//     agent2/...
//
// Agent numbers in folder names and in inter_agent_lc.dat are 1-based; node
// ids are 0-based and local to each agent. Reals are written in the shortest
// form that reads back to the same double.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "posegen/errors.hpp"
#include "posegen/model.hpp"

namespace posegen {

/// Shortest round-trip decimal form; negative zero prints as "0".
std::string format_real(double value);

std::string g2o_vertex_line(std::size_t id, const ScaledPose& pose);
std::string g2o_edge_line(std::size_t from_id, std::size_t to_id, const RelativeMeasurement& m);
/// Row of inter_agent_lc.dat (agents converted to 1-based).
std::string inter_lc_line(const InterAgentEdge& edge);
/// Row of a .tum file for node `index`.
std::string tum_line(std::size_t index, const ScaledPose& pose);

/// Vertices (estimate, or dead-reckoned odometry when the graph has no
/// estimate) followed by odometry edges and intra-agent closures.
std::string agent_g2o_text(const AgentGraph& agent, double scale);
void write_agent_g2o(const AgentGraph& agent, double scale, const std::filesystem::path& path);

void write_tum(std::span<const ScaledPose> traj, const std::filesystem::path& path);

/// Writes the multi-g2o tree. A non-empty `root` is refused with IoError
/// unless `overwrite` is set, in which case existing agentN folders and the
/// inter-agent file are replaced; unrelated files are left alone.
void write_multig2o(const MultiGraph& multi, const std::filesystem::path& root,
                    bool overwrite = false);

/// Reads a multi-g2o tree. Ground truth comes from the .tum files (left
/// empty for agents without one); the grid scale is recovered from the
/// ground-truth step length.
MultiGraph parse_multig2o(const std::filesystem::path& root);

/// Global id of agent a's node k in the concatenated graph.
std::vector<std::size_t> concatenated_offsets(const MultiGraph& multi);

/// All agents in one .g2o: vertices in ascending global id, then each
/// agent's edges, then inter-agent closures as EDGE_SE2 rows.
std::string concatenated_g2o_text(const MultiGraph& multi);
void write_concatenated_g2o(const MultiGraph& multi, const std::filesystem::path& path);

struct G2oVertex {
  std::size_t id = 0;
  ScaledPose pose;
  friend bool operator==(const G2oVertex&, const G2oVertex&) = default;
};

struct G2oEdge {
  std::size_t from_id = 0;
  std::size_t to_id = 0;
  RelativeMeasurement meas;
  friend bool operator==(const G2oEdge&, const G2oEdge&) = default;
};

struct G2oFile {
  std::vector<G2oVertex> vertices;
  std::vector<G2oEdge> edges;
};

/// Reads the VERTEX_SE2 / EDGE_SE2 subset of the .g2o format.
G2oFile read_g2o(const std::filesystem::path& path);

/// Config file schema (all keys optional; unknown keys are rejected):
///   n_agents, n_steps, steps_between_turns: unsigned integers
///   allow_reverse, align: booleans
///   block_length: positive number or null
///   initial_poses: [{"x": int, "y": int, "heading": quarter turns}, ...]
///   odom_sigma_pos, odom_sigma_ang: numbers >= 0
///   intra_lc, inter_lc: {"prob_at_zero", "radius", "sigma_pos",
///                        "sigma_ang", "decay_gain"}
///   info_mode: "exact" | "diagonal"
///   seed: unsigned 64-bit integer
GenerationConfig config_from_json_text(const std::string& text);
GenerationConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const GenerationConfig& cfg);
void save_config(const GenerationConfig& cfg, const std::filesystem::path& path);

}  // namespace posegen
