#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace casflow {

// Static block partition over [0, n). Workers write only to their own index
// range, so results are identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned w = workers;
  if (static_cast<std::size_t>(w) > n) w = static_cast<unsigned>(n);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  threads.reserve(w);
  for (unsigned t = 0; t < w; ++t) {
    std::size_t begin = n * t / w;
    std::size_t end = n * (t + 1) / w;
    threads.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace casflow
