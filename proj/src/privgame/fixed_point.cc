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
#include "privgame/fixed_point.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "privgame/status.h"

namespace privgame {
namespace {

FixedPointResult Bisect(const std::function<double(double)>& map, double lo,
                        double hi, double tolerance, int iterations) {
  // Invariant: residual(lo) >= 0 >= residual(hi).
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++iterations;
    if (map(mid) - mid >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  FixedPointResult result;
  result.x = 0.5 * (lo + hi);
  result.iterations = iterations;
  result.residual = std::abs(map(result.x) - result.x);
  result.used_bisection = true;
  return result;
}

}  // namespace

absl::StatusOr<FixedPointResult> SolveFixedPoint(
    const std::function<double(double)>& map, double lo, double hi,
    double start, const FixedPointOptions& options) {
  double x = std::clamp(start, lo, hi);
  double window_start_step = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  while (iterations < options.max_iterations) {
    const double image = map(x);
    if (!std::isfinite(image)) break;
    const double next = std::clamp(
        (1.0 - options.damping) * x + options.damping * image, lo, hi);
    const double step = std::abs(next - x);
    x = next;
    ++iterations;
    if (step <= options.tolerance) {
      converged = true;
      break;
    }
    // Slower than halving per window (a 2-cycle, jitter, or a slope near -1
    // after damping): bisection is faster.
    if (iterations % options.stall_window == 0) {
      if (step > 0.5 * window_start_step) break;
      window_start_step = step;
    }
  }

  FixedPointResult result;
  if (converged) {
    result.x = x;
    result.iterations = iterations;
    result.residual = std::abs(map(x) - x);
  } else {
    result = Bisect(map, lo, hi, options.tolerance, iterations);
  }
  // Bisection always narrows the bracket; a large residual means the map is
  // discontinuous or undefined somewhere in [lo, hi].
  if (!std::isfinite(result.residual) ||
      result.residual > 1e-8 * std::max(1.0, std::abs(result.x))) {
    return NotConvergedError(
        absl::StrCat("fixed-point solve did not converge after ",
                     result.iterations, " iterations, residual ",
                     result.residual));
  }
  return result;
}

}  // namespace privgame
