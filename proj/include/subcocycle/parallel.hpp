#pragma once

// Index-parallel loop shared by the kernels. The serial path is the
// reference; the OpenMP path must write to disjoint slots only so both
// produce identical results.

#include <exception>
#include <vector>

namespace subcocycle {

enum class Execution { serial, parallel };

// Runs body(i) for i in [0, count). Exceptions thrown inside the parallel
// region are rethrown on the calling thread (first one wins by index).
template <typename Body>
void for_range(int count, Execution execution, Body&& body) {
  if (execution == Execution::serial || count < 2) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace subcocycle
