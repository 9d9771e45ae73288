// Copyright 2026 The Corridor Planner Authors
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

#ifndef CORRIDOR_ERROR_H_
#define CORRIDOR_ERROR_H_

#include <stdexcept>

namespace corridor {

// Raised when an argument violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the MER solver when the anchor coincides with an obstacle point.
class BlockedAnchor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corridor

#endif  // CORRIDOR_ERROR_H_
