// Copyright 2026 The polyfed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyfed {

enum class ErrorCode {
  // catalog
  kDuplicateId,
  kUnknownContext,
  kUnknownNode,
  kDuplicateTriple,
  kContextCycle,
  kInvalidArgument,
  kIoFailure,
  kParseFailure,
  // schema registry
  kDuplicateEntity,
  kDuplicateStore,
  kDuplicateDataset,
  kUnknownReferredTarget,
  kUnknownAttribute,
  kUnknownDataset,
  kMissingIdentifier,
  kInvalidSchema,
  // provenance
  kUnknownExecution,
  kClosedExecution,
  kUnresolvableAttribute,
  kUnknownWorkflow,
  kMissingReference,
  kConflictingReference,
  // query language
  kQuerySyntax,
  kUnknownEntity,
  // planner
  kUnmappedAttribute,
  kAmbiguousMapping,
  kComplexAttribute,
  kNoExecutions,
  // federation
  kMissingAdapter,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this exception type; `code()` is the
// stable, machine-readable part and `what()` carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polyfed
