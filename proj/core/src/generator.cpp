#include "posegen/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "parallel.hpp"
#include "posegen/closure.hpp"
#include "posegen/errors.hpp"
#include "posegen/eval.hpp"
#include "posegen/noise.hpp"

namespace posegen {

RngStream walk_stream(std::uint64_t seed, std::size_t agent) {
  return RngStream::derive(seed, "walk", agent);
}

RngStream odometry_stream(std::uint64_t seed, std::size_t agent) {
  return RngStream::derive(seed, "odometry", agent);
}

std::vector<Edge> odometry_edges(const Trajectory& traj, const GenerationConfig& cfg,
                                 double scale, RngStream& rng) {
  const OdomNoiseParams noise{cfg.odom_sigma_pos, cfg.odom_sigma_ang};
  const OdomNoiseParams info_noise{std::max(cfg.odom_sigma_pos, kInfoSigmaFloor),
                                   std::max(cfg.odom_sigma_ang, kInfoSigmaFloor)};
  // Every grid step has length `scale` and a quarter-turn heading change, so
  // only four distinct information matrices can occur.
  std::array<InformationMatrix, 4> info_by_turn;
  for (int q = -2; q <= 1; ++q) {
    info_by_turn[q + 2] = odom_information(cfg.info_mode, q * kHalfPi, scale, info_noise);
  }

  std::vector<Edge> edges;
  edges.reserve(traj.empty() ? 0 : traj.size() - 1);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    Edge e;
    e.from_id = k - 1;
    e.to_id = k;
    e.kind = EdgeKind::odometry;
    e.meas = odometry_measurement(to_scaled(traj[k - 1], scale), to_scaled(traj[k], scale), noise,
                                  rng);
    const int turn = normalize_quarter_turns(traj[k].quarter_turns - traj[k - 1].quarter_turns);
    e.meas.info = info_by_turn[turn + 2];
    edges.push_back(e);
  }
  return edges;
}

MultiGraph generate(const GenerationConfig& cfg, unsigned threads) {
  const auto violations = validate_config(cfg);
  if (!violations.empty()) {
    std::string msg = "invalid config:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }

  const std::size_t n = cfg.n_agents;
  std::vector<Trajectory> trajectories(n);
  detail::parallel_for(n, threads, [&](std::size_t a) {
    auto rng = walk_stream(cfg.master_seed, a);
    trajectories[a] = generate_trajectory(a, cfg, rng);
  });
  if (cfg.align) {
    trajectories = align(std::move(trajectories));
  }

  MultiGraph multi;
  multi.scale = cfg.scale();
  multi.agents.resize(n);
  detail::parallel_for(n, threads, [&](std::size_t a) {
    auto& agent = multi.agents[a];
    agent.ground_truth = std::move(trajectories[a]);
    auto rng = odometry_stream(cfg.master_seed, a);
    agent.odometry = odometry_edges(agent.ground_truth, cfg, multi.scale, rng);
    agent.estimate = dead_reckon(std::span<const Edge>(agent.odometry),
                                 to_scaled(agent.ground_truth.front(), multi.scale));
  });

  generate_all(multi, cfg, threads);
  return multi;
}

}  // namespace posegen
