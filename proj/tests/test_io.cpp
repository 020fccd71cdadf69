#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "posegen/errors.hpp"
#include "posegen/eval.hpp"
#include "posegen/generator.hpp"
#include "posegen/io.hpp"

using namespace posegen;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("posegen-test-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

GenerationConfig small_config(std::size_t agents = 2, std::size_t steps = 120) {
  GenerationConfig cfg;
  cfg.n_agents = agents;
  cfg.n_steps = steps;
  cfg.intra_lc.radius = 2.0;
  cfg.inter_lc.radius = 2.0;
  cfg.inter_lc.prob_at_zero = 0.8;
  return cfg;
}

ParseErrorKind parse_kind(const fs::path& root) {
  try {
    parse_multig2o(root);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error for " << root;
  return ParseErrorKind::inconsistent_graph;
}

}  // namespace

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.0), "0");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(format_real(-2.5), "-2.5");
  EXPECT_EQ(format_real(0.1), "0.1");
  std::mt19937_64 gen(3);
  std::normal_distribution<double> d(0.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = d(gen);
    ASSERT_EQ(std::stod(format_real(v)), v);
  }
}

TEST(G2oLines, Examples) {
  EXPECT_EQ(g2o_vertex_line(0, ScaledPose{}), "VERTEX_SE2 0 0 0 0");
  RelativeMeasurement m{1, 0, 0, InformationMatrix{}};
  EXPECT_EQ(g2o_edge_line(0, 1, m), "EDGE_SE2 0 1 1 0 0 1 0 0 1 0 1");
  InterAgentEdge e{0, 4, 2, 9, m};
  EXPECT_EQ(inter_lc_line(e), "1 4 3 9 1 0 0 1 0 0 1 0 1");
}

TEST(AgentG2o, SinglePoseGraph) {
  AgentGraph g;
  g.ground_truth = {GridPose{}};
  EXPECT_EQ(agent_g2o_text(g, 1.0), "VERTEX_SE2 0 0 0 0\n");
}

TEST(AgentG2o, TwoPoseStraightGraph) {
  AgentGraph g;
  g.ground_truth = {{0, 0, 0}, {1, 0, 0}};
  g.odometry = {{0, 1, RelativeMeasurement{1, 0, 0, InformationMatrix{}}, EdgeKind::odometry}};
  EXPECT_EQ(agent_g2o_text(g, 1.0),
            "VERTEX_SE2 0 0 0 0\nVERTEX_SE2 1 1 0 0\nEDGE_SE2 0 1 1 0 0 1 0 0 1 0 1\n");
}

TEST(TumLine, YawOnlyQuaternion) {
  EXPECT_EQ(tum_line(0, ScaledPose{}), "0.000000 0 0 0 0 0 0 1");
  EXPECT_EQ(tum_line(12, ScaledPose{2, -3, 0}), "12.000000 2 -3 0 0 0 0 1");
  std::istringstream half(tum_line(1, ScaledPose{0, 0, kHalfPi}));
  std::string tok;
  std::vector<double> v;
  while (half >> tok) v.push_back(std::stod(tok));
  ASSERT_EQ(v.size(), 8u);
  EXPECT_NEAR(v[6], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(v[7], std::sqrt(0.5), 1e-15);
  std::istringstream back(tum_line(1, ScaledPose{0, 0, -kPi}));
  v.clear();
  while (back >> tok) v.push_back(std::stod(tok));
  EXPECT_NEAR(std::abs(v[6]), 1.0, 1e-15);
  EXPECT_NEAR(v[7], 0.0, 1e-15);
}

TEST(MultiG2o, LayoutAndEmptyInterFile) {
  TempDir tmp;
  auto cfg = small_config(2, 30);
  cfg.inter_lc.prob_at_zero = 0.0;
  const auto multi = generate(cfg);
  const fs::path root = tmp.path() / "out";
  write_multig2o(multi, root);
  EXPECT_TRUE(fs::is_regular_file(root / "inter_agent_lc.dat"));
  EXPECT_EQ(fs::file_size(root / "inter_agent_lc.dat"), 0u);
  for (const char* a : {"agent1", "agent2"}) {
    EXPECT_TRUE(fs::is_regular_file(root / a / "posegraph.g2o"));
    EXPECT_TRUE(fs::is_regular_file(root / a / (std::string(a) + "_GT.tum")));
  }
  EXPECT_FALSE(fs::exists(root / "agent3"));
}

TEST(MultiG2o, RoundTripIsIdentity) {
  TempDir tmp;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto cfg = small_config(3, 300);
    cfg.master_seed = seed;
    cfg.block_length = 2.5 * static_cast<double>(cfg.steps_between_turns);
    const auto multi = generate(cfg);
    ASSERT_FALSE(multi.inter_lc.empty());
    const fs::path root = tmp.path() / std::to_string(seed);
    write_multig2o(multi, root);
    const auto back = parse_multig2o(root);
    EXPECT_EQ(back.scale, multi.scale);
    EXPECT_EQ(back, multi);
  }
}

TEST(MultiG2o, RefusesNonEmptyTarget) {
  TempDir tmp;
  const auto multi = generate(small_config(2, 20));
  spit(tmp.path() / "keep.txt", "x");
  EXPECT_THROW(write_multig2o(multi, tmp.path()), IoError);
  write_multig2o(multi, tmp.path(), true);
  EXPECT_TRUE(fs::exists(tmp.path() / "keep.txt"));
  EXPECT_EQ(parse_multig2o(tmp.path()), multi);
}

TEST(MultiG2o, OverwriteRemovesStaleAgents) {
  TempDir tmp;
  write_multig2o(generate(small_config(3, 20)), tmp.path());
  const auto two = generate(small_config(2, 20));
  write_multig2o(two, tmp.path(), true);
  EXPECT_FALSE(fs::exists(tmp.path() / "agent3"));
  EXPECT_EQ(parse_multig2o(tmp.path()), two);
}

TEST(ParseMultiG2o, HandWrittenTwoAgentTree) {
  TempDir tmp;
  const auto& r = tmp.path();
  const std::string info = " 1 0 0 1 0 1";
  for (const char* a : {"agent1", "agent2"}) {
    spit(r / a / "posegraph.g2o",
         "VERTEX_SE2 0 0 0 0\nVERTEX_SE2 1 1 0 0\nVERTEX_SE2 2 2 0 0\n"
         "EDGE_SE2 0 1 1 0 0" + info + "\nEDGE_SE2 1 2 1 0 0" + info + "\n");
  }
  spit(r / "inter_agent_lc.dat", "1 2 2 0 2 0 0" + info + "\n");
  const auto m = parse_multig2o(r);
  ASSERT_EQ(m.agents.size(), 2u);
  EXPECT_EQ(m.agents[0].odometry.size(), 2u);
  ASSERT_EQ(m.inter_lc.size(), 1u);
  EXPECT_EQ(m.inter_lc[0].agent_a, 0u);
  EXPECT_EQ(m.inter_lc[0].node_a, 2u);
  EXPECT_EQ(m.inter_lc[0].agent_b, 1u);
  EXPECT_TRUE(m.agents[0].ground_truth.empty());
  const auto offsets = concatenated_offsets(m);
  EXPECT_EQ(offsets, (std::vector<std::size_t>{0, 3}));
}

TEST(ParseMultiG2o, ShortEdgeLineNamesTheLine) {
  TempDir tmp;
  const auto& r = tmp.path();
  spit(r / "agent1" / "posegraph.g2o",
       "VERTEX_SE2 0 0 0 0\nVERTEX_SE2 1 1 0 0\nEDGE_SE2 0 1 1 0 0 1 0 0 1\n");
  spit(r / "inter_agent_lc.dat", "");
  try {
    parse_multig2o(r);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::token_count);
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("posegraph.g2o"), std::string::npos);
  }
}

TEST(ParseMultiG2o, DistinctDiagnostics) {
  {
    TempDir tmp;
    spit(tmp.path() / "agent1" / "posegraph.g2o", "VERTEX_SE2 0 0 0 0\n");
    spit(tmp.path() / "agent3" / "posegraph.g2o", "VERTEX_SE2 0 0 0 0\n");
    spit(tmp.path() / "inter_agent_lc.dat", "");
    EXPECT_EQ(parse_kind(tmp.path()), ParseErrorKind::non_contiguous_agents);
  }
  {
    TempDir tmp;
    spit(tmp.path() / "agent1" / "posegraph.g2o", "VERTEX_SE2 0 0 0 0\n");
    EXPECT_EQ(parse_kind(tmp.path()), ParseErrorKind::missing_inter_lc_file);
  }
  {
    TempDir tmp;
    fs::create_directories(tmp.path() / "agent1");
    spit(tmp.path() / "inter_agent_lc.dat", "");
    EXPECT_EQ(parse_kind(tmp.path()), ParseErrorKind::missing_posegraph);
  }
  {
    TempDir tmp;
    spit(tmp.path() / "agent1" / "posegraph.g2o", "VERTEX_SE2 0 zero 0 0\n");
    spit(tmp.path() / "inter_agent_lc.dat", "");
    EXPECT_EQ(parse_kind(tmp.path()), ParseErrorKind::non_numeric);
  }
  {
    TempDir tmp;
    spit(tmp.path() / "agent1" / "posegraph.g2o", "VERTEX_XYZ 0 0 0 0\n");
    spit(tmp.path() / "inter_agent_lc.dat", "");
    EXPECT_EQ(parse_kind(tmp.path()), ParseErrorKind::unknown_record);
  }
}

TEST(Concatenated, EdgeCountAndIds) {
  TempDir tmp;
  const auto multi = generate(small_config(3, 200));
  const fs::path p = tmp.path() / "all.g2o";
  write_concatenated_g2o(multi, p);
  const auto file = read_g2o(p);
  std::size_t per_agent = 0, nodes = 0;
  for (const auto& a : multi.agents) {
    per_agent += a.odometry.size() + a.intra_lc.size();
    nodes += a.node_count();
  }
  EXPECT_EQ(file.edges.size(), per_agent + multi.inter_lc.size());
  ASSERT_EQ(file.vertices.size(), nodes);
  for (std::size_t i = 0; i < nodes; ++i) EXPECT_EQ(file.vertices[i].id, i);
  const auto offsets = concatenated_offsets(multi);
  EXPECT_EQ(offsets[1], multi.agents[0].node_count());
  // The first inter-agent row maps onto global ids.
  if (!multi.inter_lc.empty()) {
    const auto& e = multi.inter_lc.front();
    const auto& g = file.edges[per_agent];
    EXPECT_EQ(g.from_id, offsets[e.agent_a] + e.node_a);
    EXPECT_EQ(g.to_id, offsets[e.agent_b] + e.node_b);
  }
}

TEST(ConfigJson, EmptyObjectGivesDefaults) {
  EXPECT_EQ(config_from_json_text("{}"), GenerationConfig{});
}

TEST(ConfigJson, ReadsFields) {
  const auto cfg = config_from_json_text(R"({
    "n_agents": 8, "n_steps": 3500, "steps_between_turns": 5, "allow_reverse": true,
    "block_length": 10, "odom_sigma_pos": 0.05, "info_mode": "diagonal", "seed": 123,
    "intra_lc": {"prob_at_zero": 0.2, "radius": 3},
    "initial_poses": [{"x": 0, "y": 0, "heading": 0}, {"x": 1, "y": 2, "heading": -2},
                      {"x": 0, "y": 0}, {"x": 0, "y": 0}, {"x": 0, "y": 0},
                      {"x": 0, "y": 0}, {"x": 0, "y": 0}, {"x": 0, "y": 0}]
  })");
  EXPECT_EQ(cfg.n_agents, 8u);
  EXPECT_EQ(cfg.n_steps, 3500u);
  EXPECT_TRUE(cfg.allow_reverse);
  EXPECT_EQ(cfg.block_length, 10.0);
  EXPECT_DOUBLE_EQ(cfg.scale(), 2.0);
  EXPECT_EQ(cfg.info_mode, InfoMode::diagonal);
  EXPECT_EQ(cfg.master_seed, 123u);
  EXPECT_EQ(cfg.intra_lc.radius, 3.0);
  EXPECT_EQ(cfg.inter_lc, LoopClosureParams{});
  EXPECT_EQ(cfg.initial_poses[1], (GridPose{1, 2, -2}));
}

TEST(ConfigJson, Errors) {
  auto message = [](const std::string& text) {
    try {
      config_from_json_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"n_agents": -1})").find("range error"), std::string::npos);
  EXPECT_NE(message(R"({"n_agent": 2})").find("unknown key"), std::string::npos);
  EXPECT_NE(message(R"({"n_agents": "two"})").find("type mismatch"), std::string::npos);
  EXPECT_NE(message(R"({"n_agents": 2,)").find("syntax error"), std::string::npos);
  EXPECT_NE(message(R"({"intra_lc": {"prob_at_zero": 1.5}})").find("range error"),
            std::string::npos);
  EXPECT_NE(message(R"({"info_mode": "full"})").find("range error"), std::string::npos);
}

TEST(ConfigJson, SaveLoadRoundTrip) {
  TempDir tmp;
  GenerationConfig cfg = small_config(3, 77);
  cfg.block_length = 3.0;
  cfg.initial_poses = {{0, 0, 0}, {5, 5, 1}, {-3, 2, -2}};
  cfg.master_seed = 0xfedcba9876543210ULL;
  cfg.info_mode = InfoMode::diagonal;
  save_config(cfg, tmp.path() / "c.json");
  EXPECT_EQ(load_config(tmp.path() / "c.json"), cfg);
  EXPECT_THROW(load_config(tmp.path() / "missing.json"), IoError);
}
