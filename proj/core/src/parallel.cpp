#include "permsft/parallel.hpp"

namespace permsft {

namespace {

unsigned hardware_threads() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

std::atomic<unsigned> g_max_threads{hardware_threads()};

}  // namespace

unsigned max_threads() noexcept { return g_max_threads.load(); }

void set_max_threads(unsigned n) noexcept { g_max_threads.store(n == 0 ? hardware_threads() : n); }

namespace detail {

bool& in_parallel_region() noexcept {
  thread_local bool flag = false;
  return flag;
}

}  // namespace detail

}  // namespace permsft
