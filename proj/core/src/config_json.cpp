#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "posegen/io.hpp"

namespace posegen {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key '" + where + key + "'");
    }
  }
}

std::uint64_t get_unsigned(const json& obj, const std::string& key, std::uint64_t fallback,
                           const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    throw ConfigError("range error: '" + where + key + "' must be non-negative, got " + v.dump());
  }
  throw ConfigError("type mismatch: '" + where + key + "' must be an unsigned integer, got " +
                    std::string(v.type_name()));
}

std::int64_t get_integer(const json& obj, const std::string& key, std::int64_t fallback,
                         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_integer()) {
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ConfigError("range error: '" + where + key + "' is too large");
    }
    return v.get<std::int64_t>();
  }
  throw ConfigError("type mismatch: '" + where + key + "' must be an integer, got " +
                    std::string(v.type_name()));
}

double get_real(const json& obj, const std::string& key, double fallback,
                const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  throw ConfigError("type mismatch: '" + where + key + "' must be a number, got " +
                    std::string(v.type_name()));
}

bool get_bool(const json& obj, const std::string& key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>();
  throw ConfigError("type mismatch: '" + where + key + "' must be a boolean, got " +
                    std::string(v.type_name()));
}

const json& get_object(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_object()) {
    throw ConfigError("type mismatch: '" + where + key + "' must be an object, got " +
                      std::string(v.type_name()));
  }
  return v;
}

LoopClosureParams lc_from_json(const json& obj, const LoopClosureParams& defaults,
                               const std::string& where) {
  reject_unknown(obj, {"prob_at_zero", "radius", "sigma_pos", "sigma_ang", "decay_gain"}, where);
  LoopClosureParams p;
  p.prob_at_zero = get_real(obj, "prob_at_zero", defaults.prob_at_zero, where);
  p.radius = get_real(obj, "radius", defaults.radius, where);
  p.sigma_pos = get_real(obj, "sigma_pos", defaults.sigma_pos, where);
  p.sigma_ang = get_real(obj, "sigma_ang", defaults.sigma_ang, where);
  p.decay_gain = get_real(obj, "decay_gain", defaults.decay_gain, where);
  return p;
}

json lc_to_json(const LoopClosureParams& p) {
  return {{"prob_at_zero", p.prob_at_zero},
          {"radius", p.radius},
          {"sigma_pos", p.sigma_pos},
          {"sigma_ang", p.sigma_ang},
          {"decay_gain", p.decay_gain}};
}

}  // namespace

GenerationConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("type mismatch: config root must be an object");
  }
  reject_unknown(root,
                 {"n_agents", "n_steps", "steps_between_turns", "allow_reverse", "block_length",
                  "initial_poses", "odom_sigma_pos", "odom_sigma_ang", "intra_lc", "inter_lc",
                  "align", "info_mode", "seed"},
                 "");

  const GenerationConfig d;
  GenerationConfig cfg;
  cfg.n_agents = get_unsigned(root, "n_agents", d.n_agents, "");
  cfg.n_steps = get_unsigned(root, "n_steps", d.n_steps, "");
  cfg.steps_between_turns = get_unsigned(root, "steps_between_turns", d.steps_between_turns, "");
  cfg.allow_reverse = get_bool(root, "allow_reverse", d.allow_reverse, "");
  if (root.contains("block_length") && !root.at("block_length").is_null()) {
    cfg.block_length = get_real(root, "block_length", 0.0, "");
  }
  if (root.contains("initial_poses")) {
    const json& poses = root.at("initial_poses");
    if (!poses.is_array()) {
      throw ConfigError("type mismatch: 'initial_poses' must be an array");
    }
    for (std::size_t i = 0; i < poses.size(); ++i) {
      const std::string where = "initial_poses[" + std::to_string(i) + "].";
      const json& p = poses[i];
      if (!p.is_object()) {
        throw ConfigError("type mismatch: '" + where.substr(0, where.size() - 1) +
                          "' must be an object");
      }
      reject_unknown(p, {"x", "y", "heading"}, where);
      const std::int64_t heading = get_integer(p, "heading", 0, where);
      if (heading < -2 || heading > 1) {
        throw ConfigError("range error: '" + where + "heading' must be a quarter-turn count in "
                          "{-2,-1,0,1}");
      }
      cfg.initial_poses.push_back(
          {get_integer(p, "x", 0, where), get_integer(p, "y", 0, where), static_cast<int>(heading)});
    }
  }
  cfg.odom_sigma_pos = get_real(root, "odom_sigma_pos", d.odom_sigma_pos, "");
  cfg.odom_sigma_ang = get_real(root, "odom_sigma_ang", d.odom_sigma_ang, "");
  if (root.contains("intra_lc")) {
    cfg.intra_lc = lc_from_json(get_object(root, "intra_lc", ""), d.intra_lc, "intra_lc.");
  }
  if (root.contains("inter_lc")) {
    cfg.inter_lc = lc_from_json(get_object(root, "inter_lc", ""), d.inter_lc, "inter_lc.");
  }
  cfg.align = get_bool(root, "align", d.align, "");
  if (root.contains("info_mode")) {
    const json& v = root.at("info_mode");
    if (!v.is_string()) {
      throw ConfigError("type mismatch: 'info_mode' must be a string");
    }
    const auto mode = parse_info_mode(v.get<std::string>());
    if (!mode) {
      throw ConfigError("range error: 'info_mode' must be \"exact\" or \"diagonal\"");
    }
    cfg.info_mode = *mode;
  }
  cfg.master_seed = get_unsigned(root, "seed", d.master_seed, "");

  const auto violations = validate_config(cfg);
  if (!violations.empty()) {
    std::string msg = "range error:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return cfg;
}

GenerationConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) {
    throw IoError("cannot open config", path);
  }
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return config_from_json_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_json_text(const GenerationConfig& cfg) {
  json poses = json::array();
  for (const auto& p : cfg.initial_poses) {
    poses.push_back({{"x", p.x}, {"y", p.y}, {"heading", p.quarter_turns}});
  }
  json root = {
      {"n_agents", cfg.n_agents},
      {"n_steps", cfg.n_steps},
      {"steps_between_turns", cfg.steps_between_turns},
      {"allow_reverse", cfg.allow_reverse},
      {"block_length", cfg.block_length ? json(*cfg.block_length) : json(nullptr)},
      {"odom_sigma_pos", cfg.odom_sigma_pos},
      {"odom_sigma_ang", cfg.odom_sigma_ang},
      {"intra_lc", lc_to_json(cfg.intra_lc)},
      {"inter_lc", lc_to_json(cfg.inter_lc)},
      {"align", cfg.align},
      {"info_mode", to_string(cfg.info_mode)},
      {"seed", cfg.master_seed},
  };
  if (!cfg.initial_poses.empty()) {
    root["initial_poses"] = poses;
  }
  return root.dump(2) + "\n";
}

void save_config(const GenerationConfig& cfg, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) {
    throw IoError("cannot open for writing", path);
  }
  f << config_to_json_text(cfg);
  if (!f) {
    throw IoError("write failed", path);
  }
}

}  // namespace posegen
