#include <gtest/gtest.h>

#include <cmath>

#include "posegen/errors.hpp"
#include "posegen/eval.hpp"
#include "posegen/generator.hpp"
#include "posegen/noise.hpp"

using namespace posegen;

TEST(Generate, RejectsInvalidConfig) {
  GenerationConfig cfg;
  cfg.n_steps = 0;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = {};
  cfg.inter_lc.radius = -1.0;
  EXPECT_THROW(generate(cfg), ConfigError);
}

TEST(Generate, ThreadCountDoesNotChangeOutput) {
  GenerationConfig cfg;
  cfg.n_agents = 5;
  cfg.n_steps = 800;
  cfg.inter_lc.radius = 2.0;
  const auto one = generate(cfg, 1);
  EXPECT_EQ(generate(cfg, 2), one);
  EXPECT_EQ(generate(cfg, 7), one);
}

TEST(Generate, SeedChangesOutput) {
  GenerationConfig cfg;
  cfg.n_steps = 200;
  const auto a = generate(cfg);
  cfg.master_seed += 1;
  EXPECT_NE(generate(cfg), a);
}

TEST(Generate, StructureAndInformationMatrices) {
  for (InfoMode mode : {InfoMode::exact, InfoMode::diagonal}) {
    GenerationConfig cfg;
    cfg.n_agents = 3;
    cfg.n_steps = 500;
    cfg.info_mode = mode;
    cfg.intra_lc.radius = 2.0;
    const auto m = generate(cfg);
    ASSERT_EQ(m.agents.size(), 3u);
    for (const auto& a : m.agents) {
      ASSERT_EQ(a.ground_truth.size(), 501u);
      ASSERT_EQ(a.odometry.size(), 500u);
      ASSERT_EQ(a.estimate.size(), 501u);
      for (std::size_t k = 0; k < a.odometry.size(); ++k) {
        const auto& e = a.odometry[k];
        EXPECT_EQ(e.from_id, k);
        EXPECT_EQ(e.to_id, k + 1);
        ASSERT_TRUE(e.meas.info.is_positive_definite());
        if (mode == InfoMode::diagonal) {
          EXPECT_EQ(e.meas.info.i12, 0.0);
          EXPECT_EQ(e.meas.info.i13, 0.0);
          EXPECT_EQ(e.meas.info.i23, 0.0);
        }
      }
      for (const auto& e : a.intra_lc) ASSERT_TRUE(e.meas.info.is_positive_definite());
    }
    for (const auto& e : m.inter_lc) ASSERT_TRUE(e.meas.info.is_positive_definite());
  }
}

TEST(Generate, ExactStraightMoveHasOnlyYThetaCoupling) {
  GenerationConfig cfg;
  cfg.n_steps = 300;
  const auto m = generate(cfg);
  bool saw_straight = false;
  const auto& a = m.agents[0];
  for (std::size_t k = 0; k < a.odometry.size(); ++k) {
    if (a.ground_truth[k].quarter_turns != a.ground_truth[k + 1].quarter_turns) continue;
    saw_straight = true;
    const auto& info = a.odometry[k].meas.info;
    EXPECT_EQ(info.i12, 0.0);
    EXPECT_EQ(info.i13, 0.0);
    EXPECT_NE(info.i23, 0.0);
  }
  EXPECT_TRUE(saw_straight);
}

TEST(Generate, ZeroNoiseEstimateEqualsGroundTruth) {
  GenerationConfig cfg;
  cfg.n_agents = 2;
  cfg.n_steps = 3000;
  cfg.odom_sigma_pos = 0.0;
  cfg.odom_sigma_ang = 0.0;
  cfg.intra_lc.sigma_pos = 0.0;
  cfg.intra_lc.sigma_ang = 0.0;
  cfg.block_length = 12.0;
  const auto m = generate(cfg);
  EXPECT_DOUBLE_EQ(m.scale, 3.0);
  for (const auto& a : m.agents) {
    std::vector<ScaledPose> truth;
    for (const auto& p : a.ground_truth) truth.push_back(to_scaled(p, m.scale));
    EXPECT_LT(mean_ape_translation(a.estimate, truth), 1e-9);
    for (const auto& e : a.intra_lc) ASSERT_TRUE(e.meas.info.is_positive_definite());
  }
}

TEST(Generate, AlignmentCanBeDisabled) {
  GenerationConfig cfg;
  cfg.n_agents = 2;
  cfg.n_steps = 100;
  cfg.align = false;
  cfg.initial_poses = {GridPose{0, 0, 0}, GridPose{500, 0, 0}};
  auto m = generate(cfg);
  EXPECT_EQ(m.agents[1].ground_truth.front(), (GridPose{500, 0, 0}));
  EXPECT_TRUE(m.inter_lc.empty());
  cfg.align = true;
  m = generate(cfg);
  EXPECT_LT(std::abs(m.agents[1].ground_truth.front().x), 200);
}

TEST(Generate, OdometryCountIdentity) {
  for (auto [agents, steps] :
       {std::pair<std::size_t, std::size_t>{8, 3500}, {5, 10000}, {2, 1}}) {
    GenerationConfig cfg;
    cfg.n_agents = agents;
    cfg.n_steps = steps;
    EXPECT_EQ(dataset_stats(generate(cfg)).odometry_edges, agents * steps);
  }
}
