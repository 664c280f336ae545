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

#include "privgame/status.h"

#include "absl/strings/cord.h"

namespace privgame {
namespace {

constexpr absl::string_view kKindPayloadUrl = "privgame/error-kind";

absl::Status Tagged(absl::Status status, absl::string_view kind) {
  status.SetPayload(kKindPayloadUrl, absl::Cord(kind));
  return status;
}

}  // namespace

absl::Status DomainError(absl::string_view message) {
  return absl::OutOfRangeError(message);
}

absl::Status EstimationImpossibleError(absl::string_view message) {
  return Tagged(absl::FailedPreconditionError(message),
                "estimation-impossible");
}

absl::Status NotConvergedError(absl::string_view message) {
  return Tagged(absl::AbortedError(message), "not-converged");
}

ErrorKind GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kKindPayloadUrl);
  if (!payload.has_value()) return ErrorKind::kNone;
  if (*payload == "estimation-impossible") {
    return ErrorKind::kEstimationImpossible;
  }
  if (*payload == "not-converged") return ErrorKind::kNotConverged;
  return ErrorKind::kNone;
}

}  // namespace privgame
