#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace permsft {

/// Upper bound on worker threads used by every parallel kernel. Defaults to
/// the hardware concurrency; the CLI `--threads` flag lowers it.
unsigned max_threads() noexcept;
void set_max_threads(unsigned n) noexcept;

namespace detail {
/// True on threads currently running a parallel_for body; nested loops then
/// run serially.
bool& in_parallel_region() noexcept;
}  // namespace detail

/// Runs body(i) for i in [0, n) on up to max_threads() workers. Task
/// decomposition is independent of the worker count, so callers that store
/// per-task results and reduce them in index order get identical output for
/// any thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = detail::in_parallel_region() ? 1 : std::min<std::size_t>(max_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    detail::in_parallel_region() = true;
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
    detail::in_parallel_region() = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (tree) reduction in index order.
template <class T, class Op>
T tree_reduce(std::vector<T> parts, T identity, Op op) {
  if (parts.empty()) return identity;
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(op(parts[i], parts[i + 1]));
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

}  // namespace permsft
