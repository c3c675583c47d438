#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "sqg/parallel.hpp"

using sqg::parallel_for;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned threads : {0u, 1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, EmptyRangeIsNoop) {
  bool called = false;
  parallel_for(0, 4, [&](std::size_t) { called = true; });
  EXPECT_FALSE(called);
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ParallelFor, DefaultParallelismPositive) { EXPECT_GE(sqg::default_parallelism(), 1u); }
