// Copyright 2026 The padp Authors.
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

#include "padp/errors.hpp"

#include <cstdio>

namespace padp {

namespace {

std::string format_singular(int interval, double sv) {
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "singular Gram matrix on interval %d (min singular value %.3e)",
                interval, sv);
  return buf;
}

}  // namespace

SingularModelError::SingularModelError(int interval, double min_singular_value)
    : std::runtime_error(format_singular(interval, min_singular_value)),
      interval_(interval),
      min_singular_value_(min_singular_value) {}

DegenerateContextError::DegenerateContextError(int interval, int rounds_used)
    : std::runtime_error("contextual initialization reached the round cap (" +
                         std::to_string(rounds_used) + " rounds) with interval " +
                         std::to_string(interval) +
                         " still singular; contexts do not span their space"),
      interval_(interval) {}

InsufficientSampleError::InsufficientSampleError(int trial, int cell,
                                                 int distinct_prices,
                                                 int required)
    : std::runtime_error("trial " + std::to_string(trial) + ", cell " +
                         std::to_string(cell) + ": " +
                         std::to_string(distinct_prices) +
                         " distinct prices, need " + std::to_string(required)) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

IoError::IoError(const std::string& path, const std::string& message)
    : std::runtime_error(path + ": " + message) {}

}  // namespace padp
