#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bihyp {

/// Index-stable parallel map: out[i] = fn(items[i]) regardless of thread
/// count, so downstream reductions stay deterministic. The first exception
/// (lowest index) is rethrown after all workers join.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& items, Fn fn, int threads = 0)
    -> std::vector<std::invoke_result_t<Fn, const In&>> {
  using Out = std::invoke_result_t<Fn, const In&>;
  const std::size_t n = items.size();
  std::vector<Out> out(n);
  if (n == 0) return out;

  unsigned hw = std::thread::hardware_concurrency();
  int want = threads > 0 ? threads : static_cast<int>(hw ? hw : 1);
  int used = std::min<int>(want, static_cast<int>(n));

  std::vector<std::exception_ptr> errors(n);
  if (used <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        out[i] = fn(items[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (int w = 0; w < used; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += used) {
          try {
            out[i] = fn(items[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  return out;
}

}  // namespace bihyp
