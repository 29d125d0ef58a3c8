/* Copyright 2026 The elastic-sched Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Core>

#include <cassert>
#include <cstddef>

namespace elastic {

/// Piecewise-linear interpolation over sorted abscissae `xs`.
///
/// Exact (bit-for-bit) at the sample points, linear between neighbours and
/// linearly extrapolated from the two nearest samples outside the range. A
/// single sample gives a constant.
template <typename DerivedX, typename DerivedY>
typename DerivedY::Scalar interp_linear(const Eigen::DenseBase<DerivedX>& xs,
                                        const Eigen::DenseBase<DerivedY>& ys,
                                        typename DerivedX::Scalar x) {
  using Index = Eigen::Index;
  const Index n = xs.size();
  assert(n == ys.size() && n > 0);
  if (n == 1) return ys(0);

  // Segment [lo, lo + 1] used for the query; clamped to the end segments.
  Index lo = 0;
  if (x >= xs(n - 1)) {
    lo = n - 2;
  } else if (x > xs(0)) {
    Index a = 0, b = n - 1;
    while (b - a > 1) {
      const Index mid = (a + b) / 2;
      if (xs(mid) <= x) a = mid; else b = mid;
    }
    lo = a;
  }
  if (x == xs(lo)) return ys(lo);
  if (x == xs(lo + 1)) return ys(lo + 1);
  const auto t = (x - xs(lo)) / (xs(lo + 1) - xs(lo));
  return ys(lo) + t * (ys(lo + 1) - ys(lo));
}

}  // namespace elastic
