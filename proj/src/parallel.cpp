#include "mps/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mps {

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("MPSOLVE_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < n) n = cap;
      if (cap >= 1 && cap > 0 && n < 1) n = 1;
      if (cap >= 1) n = std::min(n, cap);
    } catch (...) {
      // unparsable value: keep default
    }
  }
  return n;
}

void parallel_blocks(int nblocks, const std::function<void(int)>& body) {
  if (nblocks <= 0) return;
  const int workers = std::min(worker_count(), nblocks);
  if (workers <= 1) {
    for (int b = 0; b < nblocks; ++b) body(b);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int b = next.fetch_add(1);
        if (b >= nblocks) return;
        body(b);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mps
