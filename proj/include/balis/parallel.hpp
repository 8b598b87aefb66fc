#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <algorithm>
#include <thread>
#include <vector>

namespace balis {

/// Evaluates fn(0..count-1) on up to `workers` threads; result i lands in slot i,
/// so output order never depends on scheduling. workers == 0 means hardware concurrency.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, unsigned workers, F&& fn) {
  std::vector<T> out;
  out.reserve(count);
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }

  std::vector<std::optional<T>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto n_threads = std::min<std::size_t>(workers, count);
  for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace balis
