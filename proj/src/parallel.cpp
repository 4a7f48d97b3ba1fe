#include "ddmm/parallel.hpp"

#include <atomic>

namespace ddmm::par {

namespace {
std::atomic<int> g_max_threads{0};
}

int max_threads() { return g_max_threads.load(std::memory_order_relaxed); }

void set_max_threads(int t) { g_max_threads.store(t, std::memory_order_relaxed); }

bool serial() { return max_threads() == 1; }

}  // namespace ddmm::par
