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

#ifndef KGEX_LOSS_H_
#define KGEX_LOSS_H_

#include <span>
#include <vector>

namespace kgex {

// Loss value with its derivatives w.r.t. the positive and each negative score.
struct LossResult {
  double loss = 0.0;
  double d_positive = 0.0;
  std::vector<double> d_negatives;
};

// -log(e^{x+} / (e^{x+} + sum_j e^{x-_j})), stabilised by subtracting the max.
LossResult multiclass_nll_loss(double positive, std::span<const double> negatives);

}  // namespace kgex

#endif  // KGEX_LOSS_H_
