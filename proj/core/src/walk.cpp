#include "posegen/walk.hpp"

#include <stdexcept>

namespace posegen {

GridPose step_with_turn(const GridPose& prev, int turn) {
  GridPose next = prev;
  next.quarter_turns = normalize_quarter_turns(prev.quarter_turns + turn);
  next.x += next.step_dx();
  next.y += next.step_dy();
  return next;
}

GridPose step(const GridPose& prev, std::size_t step_index, std::size_t steps_between_turns,
              int reverse_exclusion, RngStream& rng) {
  int turn = 0;
  if (step_index % steps_between_turns == 0) {
    turn = rng.uniform_int(-2 + reverse_exclusion, 1);
  }
  return step_with_turn(prev, turn);
}

Trajectory generate_trajectory(std::size_t agent, const GenerationConfig& cfg, RngStream& rng) {
  Trajectory traj;
  traj.reserve(cfg.n_steps + 1);
  traj.push_back(cfg.initial_pose(agent));
  for (std::size_t k = 1; k <= cfg.n_steps; ++k) {
    traj.push_back(step(traj.back(), k, cfg.steps_between_turns, cfg.reverse_exclusion(), rng));
  }
  return traj;
}

namespace {

struct PositionSum {
  std::int64_t sx = 0;
  std::int64_t sy = 0;
  std::int64_t n = 0;
};

PositionSum sum_positions(std::span<const GridPose> traj) {
  PositionSum s;
  for (const auto& p : traj) {
    s.sx += p.x;
    s.sy += p.y;
  }
  s.n = static_cast<std::int64_t>(traj.size());
  return s;
}

std::int64_t floor_div(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) {
    --q;
  }
  return q;
}

// Nearest integer to num/den (den > 0), ties to even.
std::int64_t round_half_even(std::int64_t num, std::int64_t den) {
  const std::int64_t q = floor_div(num, den);
  const std::int64_t rem2 = 2 * (num - q * den);
  if (rem2 > den) return q + 1;
  if (rem2 < den) return q;
  return (q % 2 == 0) ? q : q + 1;
}

}  // namespace

std::pair<double, double> anchorpoint(std::span<const GridPose> traj) {
  if (traj.empty()) {
    throw std::invalid_argument("anchorpoint: empty trajectory");
  }
  const auto s = sum_positions(traj);
  return {static_cast<double>(s.sx) / static_cast<double>(s.n),
          static_cast<double>(s.sy) / static_cast<double>(s.n)};
}

std::pair<std::int64_t, std::int64_t> alignment_offset(std::span<const GridPose> reference,
                                                       std::span<const GridPose> traj) {
  if (reference.empty() || traj.empty()) {
    throw std::invalid_argument("alignment_offset: empty trajectory");
  }
  const auto r = sum_positions(reference);
  const auto t = sum_positions(traj);
  // offset = r.s / r.n - t.s / t.n over a common denominator.
  const std::int64_t den = r.n * t.n;
  return {round_half_even(r.sx * t.n - t.sx * r.n, den),
          round_half_even(r.sy * t.n - t.sy * r.n, den)};
}

std::vector<Trajectory> align(std::vector<Trajectory> trajectories) {
  for (std::size_t a = 1; a < trajectories.size(); ++a) {
    const auto [ox, oy] = alignment_offset(trajectories[0], trajectories[a]);
    for (auto& p : trajectories[a]) {
      p.x += ox;
      p.y += oy;
    }
  }
  return trajectories;
}

}  // namespace posegen
