#include "udesign/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace udesign {

namespace {

// Shared state for one run_indexed call.  Workers hold a shared_ptr, so a
// straggler that wakes late can never touch recycled batch memory.
struct Batch {
  const std::function<void(std::size_t)>* fn = nullptr;
  std::size_t njobs = 0;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable cv_done;
  std::size_t finished = 0;
  std::exception_ptr first_error;

  void work() {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= njobs) return;
      try {
        (*fn)(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
      std::lock_guard<std::mutex> lock(mu);
      if (++finished == njobs) cv_done.notify_all();
    }
  }

  void wait() {
    std::unique_lock<std::mutex> lock(mu);
    cv_done.wait(lock, [&] { return finished == njobs; });
    if (first_error) std::rethrow_exception(first_error);
  }
};

}  // namespace

struct ThreadPool::Impl {
  unsigned nthreads;
  std::vector<std::thread> workers;

  std::mutex mu;
  std::condition_variable cv_work;
  bool shutting_down = false;
  std::uint64_t generation = 0;
  std::shared_ptr<Batch> batch;

  explicit Impl(unsigned n) : nthreads(n) {
    for (unsigned i = 1; i < nthreads; ++i)
      workers.emplace_back([this] { worker_loop(); });
  }

  ~Impl() {
    {
      std::lock_guard<std::mutex> lock(mu);
      shutting_down = true;
    }
    cv_work.notify_all();
    for (auto& w : workers) w.join();
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      std::shared_ptr<Batch> b;
      {
        std::unique_lock<std::mutex> lock(mu);
        cv_work.wait(lock, [&] { return shutting_down || generation != seen; });
        if (shutting_down) return;
        seen = generation;
        b = batch;
      }
      if (b) b->work();
    }
  }
};

ThreadPool::ThreadPool(unsigned n) {
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  impl_ = std::make_unique<Impl>(n);
}

ThreadPool::~ThreadPool() = default;

unsigned ThreadPool::size() const { return impl_->nthreads; }

void ThreadPool::run_indexed(std::size_t njobs, const std::function<void(std::size_t)>& fn) {
  if (njobs == 0) return;
  if (impl_->nthreads == 1) {
    for (std::size_t i = 0; i < njobs; ++i) fn(i);
    return;
  }
  auto b = std::make_shared<Batch>();
  b->fn = &fn;
  b->njobs = njobs;
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->batch = b;
    ++impl_->generation;
  }
  impl_->cv_work.notify_all();
  b->work();  // calling thread participates
  b->wait();
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->batch.reset();
}

}  // namespace udesign
