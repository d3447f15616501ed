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

// Compares the serial reference implementation of the suite kernels against
// the OpenMP build on a generated workload, and verifies both agree.

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "keyret/oracle.hpp"
#include "keyret/parallel.hpp"
#include "keyret/promptset.hpp"
#include "keyret/taskgen.hpp"
#include "keyret/util.hpp"

namespace {

using namespace keyret;
using Clock = std::chrono::steady_clock;

template <class Fn>
double best_of_ms(int reps, Fn&& fn) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::string corpus = "data/humaneval_mini.jsonl";
  int reps = 3;
  std::uint32_t n_k = 4;
  std::uint64_t n_p = 40;
  app.add_option("--corpus", corpus, "filler corpus JSONL");
  app.add_option("--reps", reps, "repetitions per measurement");
  app.add_option("--n-k", n_k, "key functions in the workload");
  app.add_option("--n-p", n_p, "position combinations per key");
  CLI11_PARSE(app, argc, argv);

  GenerationConfig config;
  config.variant = TaskVariant::TwoStep;
  config.n_k = n_k;
  config.n_d = 3;
  config.n_t = 4096;
  config.n_p = n_p;
  config.seed = 7;
  config.corpus_path = corpus;

  try {
    auto t0 = Clock::now();
    PromptSet set = generate_suite(config);
    auto t1 = Clock::now();
    std::printf("workload: %zu prompts of %zu tokens (generated in %.0f ms)\n",
                set.prompts.size(), config.n_t,
                std::chrono::duration<double, std::milli>(t1 - t0).count());
    std::printf("threads:  %d (OpenMP %savailable)\n\n", hardware_threads(),
                openmp_available() ? "" : "not ");
    auto tokenizer = make_tokenizer(config.tokenizer_spec);

    SuiteValidation serial_val;
    SuiteValidation parallel_val;
    const double validate_serial = best_of_ms(reps, [&] {
      serial_val = validate_suite(set, *tokenizer, ParallelMode::Serial);
    });
    const double validate_parallel = best_of_ms(reps, [&] {
      parallel_val = validate_suite(set, *tokenizer, ParallelMode::OpenMP);
    });
    if (!serial_val.ok() || !parallel_val.ok() ||
        serial_val.checked != parallel_val.checked) {
      std::fprintf(stderr, "kernel disagreement in validate\n");
      return 1;
    }

    const CommentConfig comments{CommentDirection::Both,
                                 CommentTemplate::FullSentence,
                                 CommentDepth::FullGraph};
    PromptSet annotated_serial;
    PromptSet annotated_parallel;
    const double annotate_serial_ms = best_of_ms(reps, [&] {
      annotated_serial =
          annotate_suite(set, comments, *tokenizer, ParallelMode::Serial);
    });
    const double annotate_parallel_ms = best_of_ms(reps, [&] {
      annotated_parallel =
          annotate_suite(set, comments, *tokenizer, ParallelMode::OpenMP);
    });
    if (serialize_promptset(annotated_serial) !=
        serialize_promptset(annotated_parallel)) {
      std::fprintf(stderr, "kernel disagreement in annotate\n");
      return 1;
    }

    std::printf("%-10s %12s %12s %9s\n", "kernel", "serial (ms)",
                "openmp (ms)", "speedup");
    std::printf("%-10s %12.1f %12.1f %8.2fx\n", "validate", validate_serial,
                validate_parallel, validate_serial / validate_parallel);
    std::printf("%-10s %12.1f %12.1f %8.2fx\n", "annotate",
                annotate_serial_ms, annotate_parallel_ms,
                annotate_serial_ms / annotate_parallel_ms);
    std::printf("\nserial and OpenMP outputs are identical\n");
    return 0;
  } catch (const keyret::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
