#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace levy_ep {

/// Worker count from LEVY_EP_WORKERS, falling back to 1.
inline unsigned default_workers() {
  if (const char* env = std::getenv("LEVY_EP_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Runs fn(i) for i in [0, count) on `workers` threads using a static block
/// partition. Each index must write only to its own output slot; callers then
/// reduce in index order, so results never depend on the worker count.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t used = std::min<std::size_t>(workers, count);
  std::vector<std::exception_ptr> errors(used);
  {
    std::vector<std::jthread> pool;
    pool.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t begin = count * w / used;
      const std::size_t end = count * (w + 1) / used;
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace levy_ep
