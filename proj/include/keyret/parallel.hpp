// Copyright 2026 The keyret Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KEYRET_PARALLEL_HPP_
#define KEYRET_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace keyret {

// The analysis kernels (validate, annotate, classify) are embarrassingly
// parallel over prompts. Serial mode is the reference implementation; the
// OpenMP mode must produce bit-identical results and is checked against it
// in tests and in the bench tool.
enum class ParallelMode { Serial, OpenMP };

inline bool openmp_available() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

inline int hardware_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline ParallelMode default_parallel_mode() {
  return openmp_available() ? ParallelMode::OpenMP : ParallelMode::Serial;
}

// fn(i) for i in [0, n). Exceptions thrown by fn are rethrown on the calling
// thread (first one wins) since they must not escape an OpenMP region.
template <class Fn>
void parallel_for(std::size_t n, ParallelMode mode, Fn&& fn) {
#if defined(_OPENMP)
  if (mode == ParallelMode::OpenMP) {
    std::exception_ptr err;
    std::mutex err_mu;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) {
          err = std::current_exception();
        }
      }
    }
    if (err) {
      std::rethrow_exception(err);
    }
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) {
    fn(i);
  }
}

}  // namespace keyret

#endif  // KEYRET_PARALLEL_HPP_
