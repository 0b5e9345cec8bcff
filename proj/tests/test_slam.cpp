#include <gtest/gtest.h>

#include "gridfsc/slam.hpp"

using namespace gridfsc;

namespace {
ObservationLabel label(const char* s) { return *ObservationLabel::parse(s); }
}  // namespace

TEST(SlamUpdate, PpuuAtOrigin) {
  SlamMap m;
  m.update(label("ppuu"));
  EXPECT_EQ(m.at({0, 0}), SlamCell::visited);
  EXPECT_EQ(m.at({0, 1}), SlamCell::passable);
  EXPECT_EQ(m.at({1, 0}), SlamCell::passable);
  EXPECT_EQ(m.at({0, -1}), SlamCell::unpassable);
  EXPECT_EQ(m.at({-1, 0}), SlamCell::unpassable);
  EXPECT_EQ(m.at({5, 5}), SlamCell::unknown);
  EXPECT_EQ(m.visited_count(), 1u);
}

TEST(SlamUpdate, Idempotent) {
  SlamMap once, twice;
  once.update(label("pupu"));
  twice.update(label("pupu"));
  twice.update(label("pupu"));
  EXPECT_EQ(once.cells(), twice.cells());
}

TEST(SlamUpdate, ContradictionThrows) {
  SlamMap m;
  m.update(label("ppuu"));
  m.move(Action::right);
  // Left of (1,0) is the visited origin; reporting it blocked is inconsistent.
  EXPECT_THROW(m.update(label("uupu")), SlamContradiction);
}

TEST(SlamUpdate, StandingOnUnpassableThrows) {
  SlamMap m;
  m.update(label("puuu"));
  m.set_pose({1, 0});
  EXPECT_THROW(m.update(label("pppp")), SlamContradiction);
}

TEST(SlamMove, DeadReckoning) {
  SlamMap m;
  m.move(Action::up);
  EXPECT_EQ(m.pose(), (Pose{0, 1}));
  SlamMap n;
  for (Action a : {Action::right, Action::right, Action::up}) n.move(a);
  EXPECT_EQ(n.pose(), (Pose{2, 1}));
  EXPECT_EQ(slam_move(slam_move(SlamMap{}, Action::left), Action::down).pose(), (Pose{-1, -1}));
}

TEST(SlamMove, FreeFunctionsDoNotMutate) {
  const SlamMap m;
  const SlamMap u = slam_update(m, label("pppp"));
  EXPECT_TRUE(m.cells().empty());
  EXPECT_EQ(u.visited_count(), 1u);
}

TEST(SlamPermits, VisitedBlocksForwardOnly) {
  SlamMap m;
  m.update(label("ppuu"));
  m.move(Action::right);
  m.update(label("uupp"));
  EXPECT_FALSE(m.permits(Action::left, false));
  EXPECT_TRUE(m.permits(Action::left, true));
  EXPECT_TRUE(slam_permits(m, Action::down, false));
  EXPECT_TRUE(m.permits(Action::right, false));  // unpassable is the environment's business
}

TEST(SlamRender, Glyphs) {
  EXPECT_EQ(SlamMap{}.render(), "@");
  SlamMap m;
  m.update(label("ppuu"));
  m.move(Action::right);
  m.update(label("uuup"));
  // Rows top to bottom; corners were never observed.
  EXPECT_EQ(m.render(), ":.#:\n#*@#\n:##:");
}
