/* Copyright 2026 The Spanbreaker Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#ifndef SPANBREAKER_ERRORS_HPP
#define SPANBREAKER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spanbreaker {

// Invalid arguments are reported with std::invalid_argument.

class unsupported_feature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class insufficient_data : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spanbreaker

#endif  // SPANBREAKER_ERRORS_HPP
