#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sshgl {

// Worker count: SSHGL_THREADS env var if set, else hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("SSHGL_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(job) for job = 0..n_jobs-1 on up to n_threads workers pulling from
// an atomic counter. Job results must be written to per-job slots; callers
// that need a deterministic reduction merge those slots in job order
// afterwards, so the outcome is independent of the worker count.
inline void parallel_for(int n_jobs, int n_threads, const std::function<void(int)>& fn) {
  if (n_jobs <= 0) return;
  if (n_threads <= 0) n_threads = default_thread_count();
  n_threads = std::min(n_threads, n_jobs);

  if (n_threads == 1) {
    for (int j = 0; j < n_jobs; ++j) fn(j);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      int job = next.fetch_add(1);
      if (job >= n_jobs) return;
      try {
        fn(job);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sshgl
