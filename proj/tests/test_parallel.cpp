#include <gtest/gtest.h>

#include <omp.h>

#include "support.hpp"

using namespace tempodag;
using namespace testing_support;

namespace {

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

TEST_P(ThreadCounts, ClosureMatchesSerial) {
  std::mt19937_64 rng(1201);
  for (int trial = 0; trial < 50; ++trial) {
    const AtomicDag dag = random_dag(rng, 6, 12, 40, 0.15);
    ASSERT_EQ(compute_reachability(dag), serial::compute_reachability(dag));
  }
}

TEST_P(ThreadCounts, ClosureMatchesSerialOnWideTicks) {
  std::mt19937_64 rng(1204);
  for (int trial = 0; trial < 20; ++trial) {
    // Many processes over few ticks, so each tick holds a wide level.
    const AtomicDag dag = random_dag(rng, 30, 8, 8, 0.1);
    ASSERT_EQ(compute_reachability(dag), serial::compute_reachability(dag));
  }
}

TEST_P(ThreadCounts, SamplingIsBitIdentical) {
  std::mt19937_64 rng(1202);
  for (int trial = 0; trial < 10; ++trial) {
    SystemShape shape;
    shape.processes = 4;
    const auto s = random_system(rng, shape);
    const auto scm = LinearScm::with_unit_noise(s.atomic(), generic_coefficients(rng, s.atomic()));
    const auto par = sample(s, scm, 99 + static_cast<std::uint64_t>(trial), 3000);
    const auto ser = serial::sample(s, scm, 99 + static_cast<std::uint64_t>(trial), 3000);
    ASSERT_TRUE(par.atomic_values == ser.atomic_values);
    ASSERT_TRUE(par.composite_values == ser.composite_values);
    ASSERT_EQ(par.joint_rows, ser.joint_rows);
  }
}

TEST_P(ThreadCounts, ClassificationMatchesSerial) {
  std::mt19937_64 rng(1203);
  for (int trial = 0; trial < 30; ++trial) {
    SystemShape shape;
    shape.processes = 6;
    shape.max_ticks = 3;
    const auto s = random_system(rng, shape);
    const auto par = classify_system(s);
    const auto ser = serial::classify_system(s);
    ASSERT_EQ(par.pairs, ser.pairs);
    ASSERT_EQ(par.graph.edges(), ser.graph.edges());
    ASSERT_EQ(par.cycle, ser.cycle);
  }
}

INSTANTIATE_TEST_SUITE_P(Omp, ThreadCounts, ::testing::Values(1, 2, 3, 8));

}  // namespace
