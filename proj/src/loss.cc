/*
 * Copyright 2026 The KGEx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kgex/loss.h"

#include <algorithm>
#include <cmath>

namespace kgex {

LossResult multiclass_nll_loss(double positive,
                               std::span<const double> negatives) {
  double max = positive;
  for (double x : negatives) max = std::max(max, x);

  LossResult out;
  out.d_negatives.resize(negatives.size());
  // Shifted exponentials; every term is in (0, 1].
  const double e_pos = std::exp(positive - max);
  double neg_sum = 0.0;
  for (std::size_t j = 0; j < negatives.size(); ++j) {
    out.d_negatives[j] = std::exp(negatives[j] - max);
    neg_sum += out.d_negatives[j];
  }
  const double total = e_pos + neg_sum;

  if (max == positive) {
    // log1p keeps precision when the positive dominates.
    out.loss = std::log1p(neg_sum / e_pos);
  } else {
    out.loss = std::log(total) - (positive - max);
  }
  out.d_positive = -neg_sum / total;
  for (double& d : out.d_negatives) d /= total;
  return out;
}

}  // namespace kgex
