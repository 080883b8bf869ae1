#include <doctest.h>

#include <atomic>
#include <vector>

#include "lightray/parallel.hpp"

using namespace lightray;

TEST_SUITE("parallel") {

TEST_CASE("every index runs once for any worker count") {
  const int saved = thread_count();
  for (int threads : {1, 2, 3, 8}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  set_thread_count(saved);
}

TEST_CASE("nested calls run serially") {
  const int saved = thread_count();
  set_thread_count(4);
  std::atomic<int> total{0};
  parallel_for(8, [&](std::size_t) { parallel_for(5, [&](std::size_t) { total += 1; }); });
  CHECK(total == 40);
  parallel_for(0, [&](std::size_t) { total += 100; });
  CHECK(total == 40);
  set_thread_count(saved);
}

TEST_CASE("non-positive counts select the default") {
  const int saved = thread_count();
  set_thread_count(0);
  CHECK(thread_count() >= 1);
  set_thread_count(saved);
}

}  // TEST_SUITE
