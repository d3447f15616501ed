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

#ifndef KEYRET_ERRORS_HPP_
#define KEYRET_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace keyret {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent configuration (bad flag values, header mismatch on
// resume, impossible generation settings).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The mandatory snippets of a prompt (task chain, distractors, assert stem)
// do not fit within the token budget.
class TokenBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The filler pool ran out before the prompt could be padded to within one
// function of the token budget.
class CorpusTooSmall : public Error {
 public:
  using Error::Error;
};

// A corpus file could not be read or is not JSONL with the expected fields.
class CorpusFormatError : public Error {
 public:
  using Error::Error;
};

// Source text that does not follow the flat def-block shape.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A function name was requested that is not defined in the graph at hand.
class UnknownTaskName : public Error {
 public:
  using Error::Error;
};

// Chain resolution hit a leaf-less dead end: a dangling callee, an undefined
// entry, or a body that neither returns a literal nor calls anything.
class UnresolvableEntry : public Error {
 public:
  using Error::Error;
};

// Chain resolution revisited a function already on the active path.
class CycleDetected : public Error {
 public:
  using Error::Error;
};

// The backend cannot honour first-token constraints.
class ConstraintUnsupported : public Error {
 public:
  using Error::Error;
};

// A backend call failed in a way that a retry may fix (timeouts, 429/5xx).
class TransientBackendError : public Error {
 public:
  using Error::Error;
};

// The backend kept failing after the whole retry budget was spent.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

// A numeric routine was called outside its domain (k > n, short samples).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Grouped results or plot inputs do not have the shape the emitter needs.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Some prompts in the set have no evaluation record at all.
class MissingRecords : public Error {
 public:
  MissingRecords(const std::string& what, std::vector<std::string> ids)
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

}  // namespace keyret

#endif  // KEYRET_ERRORS_HPP_
