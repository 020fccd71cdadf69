#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdlib>

#include "posegen/generator.hpp"
#include "posegen/walk.hpp"

using namespace posegen;

TEST(Step, StraightWhenGateClosed) {
  RngStream rng(1);
  const GridPose next = step({0, 0, 0}, 1, 4, 1, rng);
  EXPECT_EQ(next, (GridPose{1, 0, 0}));
}

TEST(Step, LeftTurn) {
  EXPECT_EQ(step_with_turn({0, 0, 0}, 1), (GridPose{0, 1, 1}));
}

TEST(Step, ReversalTurn) {
  EXPECT_EQ(step_with_turn({2, 3, 1}, -2), (GridPose{2, 2, -1}));
}

TEST(Step, GateOpensOnMultiplesOfS) {
  // With a single-valued support the turn is forced: n_d = 1 and s = 1
  // means a draw every step, so heading changes must stay within one turn.
  RngStream rng(3);
  GridPose p{};
  for (std::size_t k = 1; k <= 1000; ++k) {
    const GridPose n = step(p, k, 1, 1, rng);
    const int dq = normalize_quarter_turns(n.quarter_turns - p.quarter_turns);
    ASSERT_NE(dq, -2);
    p = n;
  }
}

TEST(Trajectory, LengthAndInitialPose) {
  GenerationConfig cfg;
  cfg.n_agents = 2;
  cfg.n_steps = 25;
  cfg.initial_poses = {GridPose{5, -3, 1}, GridPose{0, 0, -2}};
  auto rng = walk_stream(9, 0);
  const auto traj = generate_trajectory(0, cfg, rng);
  ASSERT_EQ(traj.size(), 26u);
  EXPECT_EQ(traj.front(), (GridPose{5, -3, 1}));
}

TEST(Trajectory, SinglePoseWithoutSteps) {
  // n_steps = 0 is rejected by validation but the walker itself handles it.
  GenerationConfig cfg;
  cfg.n_steps = 0;
  RngStream rng(1);
  const auto traj = generate_trajectory(0, cfg, rng);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0], GridPose{});
}

TEST(Trajectory, GridStructureInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (bool reverse : {false, true}) {
      GenerationConfig cfg;
      cfg.n_steps = 2000;
      cfg.steps_between_turns = 1 + seed % 5;
      cfg.allow_reverse = reverse;
      auto rng = walk_stream(seed, 0);
      const auto traj = generate_trajectory(0, cfg, rng);
      for (std::size_t k = 1; k < traj.size(); ++k) {
        const auto dx = std::llabs(traj[k].x - traj[k - 1].x);
        const auto dy = std::llabs(traj[k].y - traj[k - 1].y);
        ASSERT_EQ(dx + dy, 1);
        ASSERT_GE(traj[k].quarter_turns, -2);
        ASSERT_LE(traj[k].quarter_turns, 1);
        if (k % cfg.steps_between_turns != 0) {
          ASSERT_EQ(traj[k].quarter_turns, traj[k - 1].quarter_turns);
        }
        if (!reverse) {
          ASSERT_NE(normalize_quarter_turns(traj[k].quarter_turns - traj[k - 1].quarter_turns),
                    -2);
        }
      }
    }
  }
}

TEST(Trajectory, Deterministic) {
  GenerationConfig cfg;
  cfg.n_steps = 500;
  auto r1 = walk_stream(77, 3);
  auto r2 = walk_stream(77, 3);
  EXPECT_EQ(generate_trajectory(3, cfg, r1), generate_trajectory(3, cfg, r2));
  auto r3 = walk_stream(78, 3);
  auto r4 = walk_stream(77, 3);
  EXPECT_NE(generate_trajectory(3, cfg, r3), generate_trajectory(3, cfg, r4));
}

TEST(Trajectory, TurnFrequenciesUniform) {
  // 3-sigma binomial band on every support value over >= 1e4 turn events.
  for (bool reverse : {true, false}) {
    GenerationConfig cfg;
    cfg.n_steps = 40000 * 4;
    cfg.allow_reverse = reverse;
    auto rng = walk_stream(11, 0);
    const auto traj = generate_trajectory(0, cfg, rng);
    std::array<int, 4> counts{};
    std::size_t events = 0;
    for (std::size_t k = cfg.steps_between_turns; k < traj.size(); k += cfg.steps_between_turns) {
      ++counts[normalize_quarter_turns(traj[k].quarter_turns - traj[k - 1].quarter_turns) + 2];
      ++events;
    }
    const int lo = reverse ? -2 : -1;
    const double p = 1.0 / (2 - lo);
    const double mean = p * events;
    const double sd = std::sqrt(events * p * (1 - p));
    for (int t = lo; t <= 1; ++t) {
      EXPECT_NEAR(counts[t + 2], mean, 3 * sd) << "turn " << t;
    }
    if (!reverse) EXPECT_EQ(counts[0], 0);
  }
}

TEST(Anchorpoint, Examples) {
  using P = GridPose;
  const std::vector<P> a{{0, 0, 0}, {2, 0, 0}};
  EXPECT_EQ(anchorpoint(a), (std::pair{1.0, 0.0}));
  const std::vector<P> b{{3, 4, 0}};
  EXPECT_EQ(anchorpoint(b), (std::pair{3.0, 4.0}));
  const std::vector<P> c{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  EXPECT_EQ(anchorpoint(c), (std::pair{0.5, 0.5}));
  EXPECT_THROW(anchorpoint(std::vector<P>{}), std::invalid_argument);
}

TEST(Align, SingleAndIdentical) {
  GenerationConfig cfg;
  cfg.n_steps = 50;
  auto rng = walk_stream(5, 0);
  const auto t = generate_trajectory(0, cfg, rng);
  EXPECT_EQ(align({t}), std::vector<Trajectory>{t});
  EXPECT_EQ(align({t, t}), (std::vector<Trajectory>{t, t}));
}

TEST(Align, ExactIntegerTranslationIsUndone) {
  GenerationConfig cfg;
  cfg.n_steps = 80;
  auto rng = walk_stream(6, 0);
  const auto t0 = generate_trajectory(0, cfg, rng);
  auto t1 = t0;
  for (auto& p : t1) {
    p.x += 10;
    p.y -= 4;
  }
  const auto aligned = align({t0, t1});
  EXPECT_EQ(aligned[0], t0);
  EXPECT_EQ(aligned[1], t0);
  EXPECT_EQ(anchorpoint(aligned[1]), anchorpoint(aligned[0]));
}

TEST(Align, IdempotentAndShapePreserving) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenerationConfig cfg;
    cfg.n_steps = 37 + seed;
    std::vector<Trajectory> ts;
    for (std::size_t a = 0; a < 4; ++a) {
      auto rng = walk_stream(seed, a);
      ts.push_back(generate_trajectory(a, cfg, rng));
    }
    const auto once = align(ts);
    EXPECT_EQ(align(once), once);
    for (std::size_t a = 0; a < ts.size(); ++a) {
      const auto ox = once[a][0].x - ts[a][0].x;
      const auto oy = once[a][0].y - ts[a][0].y;
      for (std::size_t k = 0; k < ts[a].size(); ++k) {
        ASSERT_EQ(once[a][k].x - ts[a][k].x, ox);
        ASSERT_EQ(once[a][k].y - ts[a][k].y, oy);
        ASSERT_EQ(once[a][k].quarter_turns, ts[a][k].quarter_turns);
      }
      const auto [ax, ay] = anchorpoint(once[a]);
      const auto [rx, ry] = anchorpoint(once[0]);
      EXPECT_LE(std::abs(ax - rx), 0.5 + 1e-12);
      EXPECT_LE(std::abs(ay - ry), 0.5 + 1e-12);
    }
  }
}

TEST(Align, HalfOffsetTiesAreStable) {
  // Anchor difference of exactly 0.5 in x: rounding to even keeps it put,
  // and a second pass must not move it.
  const Trajectory ref{{0, 0, 0}, {1, 0, 0}};
  const Trajectory other{{0, 0, 0}};
  const auto once = align({ref, other});
  EXPECT_EQ(once[1][0].x, 0);
  EXPECT_EQ(align(once), once);
  const Trajectory other2{{-1, 0, 0}};
  const auto twice = align({ref, other2});
  EXPECT_EQ(twice[1][0].x, 1);  // -1 + round_even(1.5) = -1 + 2
  EXPECT_EQ(align(twice), twice);
}
