// Copyright 2026 The privgame Authors.
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

#ifndef PRIVGAME_STATUS_H_
#define PRIVGAME_STATUS_H_

#include "absl/strings/string_view.h"

#include "absl/status/status.h"

namespace privgame {

// Error kinds that do not map one-to-one onto absl status codes are tagged
// with a payload so the C boundary can report them distinctly.
enum class ErrorKind {
  kNone,
  kEstimationImpossible,
  kNotConverged,
};

// Domain errors (precision or variance outside the function's domain).
absl::Status DomainError(absl::string_view message);

// The all-zero precision profile: the mean cannot be estimated.
absl::Status EstimationImpossibleError(absl::string_view message);

// A solver exhausted its iteration budget. The message carries the residual.
absl::Status NotConvergedError(absl::string_view message);

ErrorKind GetErrorKind(const absl::Status& status);

}  // namespace privgame

#endif  // PRIVGAME_STATUS_H_
