#include "mlnhardy/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mlnhardy {

namespace {
std::atomic<int> g_default_threads{0};

int hardware_default() {
  if (const char* env = std::getenv("MLNHARDY_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}
}  // namespace

int default_threads() {
  int t = g_default_threads.load(std::memory_order_relaxed);
  return t > 0 ? t : hardware_default();
}

void set_default_threads(int t) { g_default_threads.store(t, std::memory_order_relaxed); }

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk) {
  int t = resolve_threads(threads);
  if (n == 0) return;
  t = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), n));
  if (t <= 1) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    std::size_t b = n * static_cast<std::size_t>(w) / static_cast<std::size_t>(t);
    std::size_t e = n * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(t);
    pool.emplace_back([&chunk, b, e] { chunk(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mlnhardy
