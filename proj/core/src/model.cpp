#include "posegen/model.hpp"

#include <cmath>
#include <stdexcept>

namespace posegen {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("wrap_angle: non-finite angle");
  }
  // Values already in range are returned untouched so that wrapping is
  // idempotent bit for bit.
  if (theta >= -kPi && theta < kPi) {
    return theta;
  }
  constexpr double kTwoPi = 2.0 * kPi;
  double r = std::fmod(theta + kPi, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  if (r >= kTwoPi) {
    r -= kTwoPi;
  }
  double out = r - kPi;
  if (out >= kPi) {
    out = -kPi;
  }
  return out;
}

int normalize_quarter_turns(int q) {
  int m = ((q + 2) % 4 + 4) % 4;
  return m - 2;
}

std::int64_t GridPose::step_dx() const {
  switch (quarter_turns) {
    case 0: return 1;
    case -2: return -1;
    default: return 0;
  }
}

std::int64_t GridPose::step_dy() const {
  switch (quarter_turns) {
    case 1: return 1;
    case -1: return -1;
    default: return 0;
  }
}

ScaledPose to_scaled(const GridPose& pose, double scale) {
  return {static_cast<double>(pose.x) * scale, static_cast<double>(pose.y) * scale,
          pose.heading()};
}

double InformationMatrix::operator()(int row, int col) const {
  if (row > col) {
    std::swap(row, col);
  }
  switch (row * 3 + col) {
    case 0: return i11;
    case 1: return i12;
    case 2: return i13;
    case 4: return i22;
    case 5: return i23;
    case 8: return i33;
    default: throw std::out_of_range("InformationMatrix index");
  }
}

bool InformationMatrix::is_positive_definite() const {
  const double m1 = i11;
  const double m2 = i11 * i22 - i12 * i12;
  const double m3 = i11 * (i22 * i33 - i23 * i23) - i12 * (i12 * i33 - i23 * i13) +
                    i13 * (i12 * i23 - i22 * i13);
  return std::isfinite(m3) && m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

std::string to_string(InfoMode mode) {
  return mode == InfoMode::exact ? "exact" : "diagonal";
}

std::optional<InfoMode> parse_info_mode(const std::string& text) {
  if (text == "exact") return InfoMode::exact;
  if (text == "diagonal") return InfoMode::diagonal;
  return std::nullopt;
}

double GenerationConfig::scale() const {
  const double d = block_length.value_or(static_cast<double>(steps_between_turns));
  return d / static_cast<double>(steps_between_turns);
}

GridPose GenerationConfig::initial_pose(std::size_t agent) const {
  if (agent < initial_poses.size()) {
    return initial_poses[agent];
  }
  return {};
}

namespace {

void check_lc(const LoopClosureParams& p, const std::string& prefix,
              std::vector<std::string>& out) {
  if (!(p.prob_at_zero >= 0.0 && p.prob_at_zero <= 1.0)) {
    out.push_back(prefix + ".prob_at_zero out of [0,1]");
  }
  if (!(p.radius >= 0.0) || !std::isfinite(p.radius)) {
    out.push_back(prefix + ".radius must be >= 0");
  }
  if (!(p.sigma_pos >= 0.0) || !std::isfinite(p.sigma_pos)) {
    out.push_back(prefix + ".sigma_pos must be >= 0");
  }
  if (!(p.sigma_ang >= 0.0) || !std::isfinite(p.sigma_ang)) {
    out.push_back(prefix + ".sigma_ang must be >= 0");
  }
  if (!(p.decay_gain > 0.0) || !std::isfinite(p.decay_gain)) {
    out.push_back(prefix + ".decay_gain must be > 0");
  }
}

}  // namespace

std::vector<std::string> validate_config(const GenerationConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.n_agents < 1) out.push_back("n_agents must be ≥ 1");
  if (cfg.n_steps < 1) out.push_back("n_steps must be ≥ 1");
  if (cfg.steps_between_turns < 1) out.push_back("steps_between_turns must be ≥ 1");
  if (cfg.block_length && !(*cfg.block_length > 0.0 && std::isfinite(*cfg.block_length))) {
    out.push_back("block_length must be > 0");
  }
  if (!cfg.initial_poses.empty() && cfg.initial_poses.size() != cfg.n_agents) {
    out.push_back("initial_poses must list exactly n_agents poses");
  }
  for (std::size_t a = 0; a < cfg.initial_poses.size(); ++a) {
    const int q = cfg.initial_poses[a].quarter_turns;
    if (q < -2 || q > 1) {
      out.push_back("initial_poses[" + std::to_string(a) + "].heading out of {-2,-1,0,1}");
    }
  }
  if (!(cfg.odom_sigma_pos >= 0.0) || !std::isfinite(cfg.odom_sigma_pos)) {
    out.push_back("odom_sigma_pos must be >= 0");
  }
  if (!(cfg.odom_sigma_ang >= 0.0) || !std::isfinite(cfg.odom_sigma_ang)) {
    out.push_back("odom_sigma_ang must be >= 0");
  }
  check_lc(cfg.intra_lc, "intra_lc", out);
  check_lc(cfg.inter_lc, "inter_lc", out);
  return out;
}

}  // namespace posegen
