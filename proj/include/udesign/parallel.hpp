#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace udesign {

// Minimal fixed-size worker pool.  Jobs are indexed; callers that need
// deterministic results write into per-index slots and reduce sequentially
// afterwards, so numbers never depend on scheduling order or pool size.
class ThreadPool {
 public:
  // n == 0 picks hardware concurrency; n == 1 runs jobs inline.
  explicit ThreadPool(unsigned n = 1);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned size() const;

  // Runs fn(0) .. fn(njobs-1), blocking until all complete.  The first
  // exception thrown by a job is rethrown here.
  void run_indexed(std::size_t njobs, const std::function<void(std::size_t)>& fn);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace udesign
