#pragma once

#include <cstddef>
#include <functional>

namespace randop {

enum class Backend { serial, openmp };

struct Execution {
  int workers = 1;
  Backend backend = Backend::openmp;
};

// Runs body(i) for i in [0, count). The serial backend is the reference
// implementation; the OpenMP backend must produce identical per-index
// results. Exceptions are captured per index and the one from the lowest
// failing index is rethrown after the loop, so failures are reported the
// same way for every worker count.
void for_each_index(std::size_t count, const Execution& exec, const std::function<void(std::size_t)>& body);

void for_each_index_serial(std::size_t count, const std::function<void(std::size_t)>& body);
void for_each_index_openmp(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace randop
