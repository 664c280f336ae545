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
#ifndef PRIVGAME_FIXED_POINT_H_
#define PRIVGAME_FIXED_POINT_H_

#include <functional>

#include "absl/status/statusor.h"

namespace privgame {

struct FixedPointOptions {
  double damping = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 1'000'000;
  // Iterations over which the step must at least halve; otherwise the
  // solver falls back to bisection.
  int stall_window = 50;
};

struct FixedPointResult {
  double x = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |map(x) - x|
  bool used_bisection = false;
};

// Finds the fixed point of a continuous map on [lo, hi] whose residual
// map(x) - x changes sign exactly once, from >= 0 at lo to <= 0 at hi.
// Runs damped iteration x <- (1 - a) x + a map(x) from start; if the steps
// stop shrinking, falls back to bisection on the residual sign.
absl::StatusOr<FixedPointResult> SolveFixedPoint(
    const std::function<double(double)>& map, double lo, double hi,
    double start, const FixedPointOptions& options = {});

}  // namespace privgame

#endif  // PRIVGAME_FIXED_POINT_H_
