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

#ifndef KGEX_FOCUSE_H_
#define KGEX_FOCUSE_H_

#include <cstddef>
#include <optional>
#include <span>

#include "kgex/loss.h"

namespace kgex {

struct FocusEConfig {
  bool enabled = false;
  // Epochs over which beta decays linearly from 1 to 0.
  double decay = 0.0;
  // Overrides the schedule with a constant beta.
  std::optional<double> fixed_beta;
};

// ln(1 + e^f), >= 0 for every finite f.
double softplus_score(double f);
// d softplus / df.
double sigmoid(double f);

// Positive triple: beta + (1 - w)(1 - beta). Corruption: beta + w(1 - beta).
// Throws RangeError when w or beta lies outside [0, 1].
double modulating_factor(double w, double beta, bool is_positive);

// alpha * softplus(f).
double focused_score(double f, double w, double beta, bool is_positive);

// NLL over focused scores. `w` is the positive triple's weight; it sets alpha
// for the positive and all of its corruptions. Derivatives are w.r.t. the raw
// scores f.
LossResult focuse_loss(double positive_f, double w,
                       std::span<const double> negative_f, double beta);

// NLL over softplus(f) with no modulation.
LossResult softplus_nll_loss(double positive_f,
                             std::span<const double> negative_f);

// max(0, 1 - epoch / decay); decay == 0 gives 0 from the start.
double beta_schedule(std::size_t epoch, double decay);

// Beta in effect for an epoch under `config` (1 when FocusE is disabled).
double epoch_beta(const FocusEConfig& config, std::size_t epoch);

}  // namespace kgex

#endif  // KGEX_FOCUSE_H_
