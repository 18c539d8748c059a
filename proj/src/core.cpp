#include "coulomb/core.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace coulomb {

namespace {
int g_threads = 0;  // 0 = not set yet

int threads_from_env() {
  if (const char* s = std::getenv("COULOMB_LAB_THREADS")) {
    int n = std::atoi(s);
    if (n >= 1) return n;
  }
  return 1;
}
}  // namespace

int num_threads() {
  if (g_threads == 0) g_threads = threads_from_env();
  return g_threads;
}

void set_num_threads(int n) { g_threads = std::max(1, n); }

void parallel_for_blocked(Eigen::Index n, Eigen::Index block,
                          const std::function<void(Eigen::Index, Eigen::Index)>& f) {
  if (n <= 0) return;
  block = std::max<Eigen::Index>(1, block);
  const Eigen::Index nblocks = (n + block - 1) / block;
  const int workers = std::min<int>(num_threads(), static_cast<int>(nblocks));
  if (workers <= 1) {
    for (Eigen::Index b = 0; b < nblocks; ++b)
      f(b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<Eigen::Index> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        Eigen::Index b = next.fetch_add(1);
        if (b >= nblocks) return;
        f(b * block, std::min(n, (b + 1) * block));
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace coulomb
