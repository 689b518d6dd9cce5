#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace demi {

/// Worker count: DEMI_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("DEMI_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates `work(chunk)` for chunk = 0..chunks-1 and folds the results
/// into `acc` strictly in chunk order. Chunks run in waves across worker
/// threads, so the result does not depend on the thread count.
template <class Acc, class Work, class Merge>
void ordered_chunk_reduce(std::uint64_t chunks, Acc& acc, Work&& work, Merge&& merge) {
  const unsigned workers = worker_count();
  if (workers <= 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) merge(acc, work(c));
    return;
  }
  const std::uint64_t wave = std::uint64_t{workers} * 2;
  for (std::uint64_t first = 0; first < chunks; first += wave) {
    const std::uint64_t count = std::min(wave, chunks - first);
    std::vector<std::optional<decltype(work(first))>> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::uint64_t>(workers, count); ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
          try {
            results[i].emplace(work(first + i));
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (std::uint64_t i = 0; i < count; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      merge(acc, std::move(*results[i]));
    }
  }
}

}  // namespace demi
