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

#include "polyfed/error.h"

namespace polyfed {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownContext: return "UnknownContext";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kDuplicateTriple: return "DuplicateTriple";
    case ErrorCode::kContextCycle: return "ContextCycle";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kParseFailure: return "ParseFailure";
    case ErrorCode::kDuplicateEntity: return "DuplicateEntity";
    case ErrorCode::kDuplicateStore: return "DuplicateStore";
    case ErrorCode::kDuplicateDataset: return "DuplicateDataset";
    case ErrorCode::kUnknownReferredTarget: return "UnknownReferredTarget";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kMissingIdentifier: return "MissingIdentifier";
    case ErrorCode::kInvalidSchema: return "InvalidSchema";
    case ErrorCode::kUnknownExecution: return "UnknownExecution";
    case ErrorCode::kClosedExecution: return "ClosedExecution";
    case ErrorCode::kUnresolvableAttribute: return "UnresolvableAttribute";
    case ErrorCode::kUnknownWorkflow: return "UnknownWorkflow";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kConflictingReference: return "ConflictingReference";
    case ErrorCode::kQuerySyntax: return "ParseError";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kUnmappedAttribute: return "UnmappedAttribute";
    case ErrorCode::kAmbiguousMapping: return "AmbiguousMapping";
    case ErrorCode::kComplexAttribute: return "ComplexAttribute";
    case ErrorCode::kNoExecutions: return "NoExecutions";
    case ErrorCode::kMissingAdapter: return "MissingAdapter";
  }
  return "Unknown";
}

}  // namespace polyfed
