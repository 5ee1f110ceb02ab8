#include "busgate/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace busgate {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned thread_count() {
  const unsigned n = g_threads.load();
  return n ? n : std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(unsigned n) { g_threads.store(n); }

}  // namespace busgate
