#include "specfun/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace specfun {

int worker_count() {
  if (const char* env = std::getenv("SPECFUN_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested > 0) return requested;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(threads > 0 ? threads : worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> failed_at(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          errors[w] = std::current_exception();
          failed_at[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
  }
}

}  // namespace specfun
