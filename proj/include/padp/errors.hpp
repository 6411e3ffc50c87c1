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

#ifndef PADP_ERRORS_HPP_
#define PADP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace padp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A local Gram matrix is numerically singular.
class SingularModelError : public std::runtime_error {
 public:
  SingularModelError(int interval, double min_singular_value);

  int interval() const { return interval_; }
  double min_singular_value() const { return min_singular_value_; }

 private:
  int interval_;
  double min_singular_value_;
};

/// Internal policy state broke one of its structural invariants.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Contextual initialization hit the round cap with a singular interval.
class DegenerateContextError : public std::runtime_error {
 public:
  DegenerateContextError(int interval, int rounds_used);

  int interval() const { return interval_; }

 private:
  int interval_;
};

/// Smoothness estimation found a cell without enough distinct prices.
class InsufficientSampleError : public std::runtime_error {
 public:
  InsufficientSampleError(int trial, int cell, int distinct_prices, int required);
};

/// Experiment spec or config failed validation; `field` names the culprit.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& message);
};

}  // namespace padp

#endif  // PADP_ERRORS_HPP_
