// Copyright 2026 The primesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace primesq {

// A computation needs more range, memory or time than the configured
// capacity allows. `offending_index` is the interval index k at which the
// limit was hit (0 when not tied to an interval).
class ResourceLimitError : public std::runtime_error {
  public:
    ResourceLimitError(const std::string& what, std::size_t offending_index = 0)
        : std::runtime_error(what), offending_index_(offending_index) {}

    std::size_t offending_index() const noexcept { return offending_index_; }

  private:
    std::size_t offending_index_;
};

// The requested evaluation route does not cover these parameters
// (e.g. the three-sum covariance with an odd modulus).
class UnsupportedCaseError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace primesq
