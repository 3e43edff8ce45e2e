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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace polyfed {

// Typed literal shared by the catalog, the query language and the stores.
// Equality and ordering are type-strict: 1 and 1.0 and "1" are all distinct.
using Scalar = std::variant<std::string, std::int64_t, double, bool>;

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

std::string_view to_string(CompareOp op);
std::optional<CompareOp> parse_compare_op(std::string_view text);

// Values of different types never compare true, not even under kNe.
bool compare(const Scalar& lhs, CompareOp op, const Scalar& rhs);

std::string_view type_name(const Scalar& value);

// Shortest round-trippable text; always contains '.', 'e', "inf" or "nan" so
// it can never be mistaken for an integer.
std::string format_double(double value);

// Human-oriented rendering: strings verbatim, numbers and booleans as text.
std::string format_scalar(const Scalar& value);

}  // namespace polyfed
