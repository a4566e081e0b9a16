#include "randop/parallel.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <vector>

#include <omp.h>

#include "randop/errors.hpp"

namespace randop {

void for_each_index_serial(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

void for_each_index_openmp(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (workers < 1) throw InvalidArgument("worker count must be >= 1");
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void for_each_index(std::size_t count, const Execution& exec, const std::function<void(std::size_t)>& body) {
  if (exec.backend == Backend::serial) {
    for_each_index_serial(count, body);
  } else {
    for_each_index_openmp(count, exec.workers, body);
  }
}

}  // namespace randop
