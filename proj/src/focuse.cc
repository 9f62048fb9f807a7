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

#include "kgex/focuse.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kgex/error.h"

namespace kgex {

double softplus_score(double f) {
  if (f > 0.0) return f + std::log1p(std::exp(-f));
  return std::log1p(std::exp(f));
}

double sigmoid(double f) {
  if (f >= 0.0) return 1.0 / (1.0 + std::exp(-f));
  const double e = std::exp(f);
  return e / (1.0 + e);
}

double modulating_factor(double w, double beta, bool is_positive) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw RangeError("numeric weight " + std::to_string(w) + " outside [0, 1]");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw RangeError("beta " + std::to_string(beta) + " outside [0, 1]");
  }
  const double corruption = beta + w * (1.0 - beta);
  // beta + (1 - w)(1 - beta), written as the complement so the pair sums to
  // 1 + beta without rounding drift.
  return is_positive ? (1.0 + beta) - corruption : corruption;
}

double focused_score(double f, double w, double beta, bool is_positive) {
  return modulating_factor(w, beta, is_positive) * softplus_score(f);
}

LossResult focuse_loss(double positive_f, double w,
                       std::span<const double> negative_f, double beta) {
  const double alpha_pos = modulating_factor(w, beta, true);
  const double alpha_neg = modulating_factor(w, beta, false);

  std::vector<double> h_neg(negative_f.size());
  for (std::size_t j = 0; j < negative_f.size(); ++j) {
    h_neg[j] = alpha_neg * softplus_score(negative_f[j]);
  }
  LossResult out =
      multiclass_nll_loss(alpha_pos * softplus_score(positive_f), h_neg);
  out.d_positive = out.d_positive * alpha_pos * sigmoid(positive_f);
  for (std::size_t j = 0; j < negative_f.size(); ++j) {
    out.d_negatives[j] = out.d_negatives[j] * alpha_neg * sigmoid(negative_f[j]);
  }
  return out;
}

LossResult softplus_nll_loss(double positive_f,
                             std::span<const double> negative_f) {
  std::vector<double> g_neg(negative_f.size());
  for (std::size_t j = 0; j < negative_f.size(); ++j) {
    g_neg[j] = softplus_score(negative_f[j]);
  }
  LossResult out = multiclass_nll_loss(softplus_score(positive_f), g_neg);
  out.d_positive *= sigmoid(positive_f);
  for (std::size_t j = 0; j < negative_f.size(); ++j) {
    out.d_negatives[j] *= sigmoid(negative_f[j]);
  }
  return out;
}

double beta_schedule(std::size_t epoch, double decay) {
  if (decay < 0.0) throw RangeError("decay must be >= 0");
  if (decay == 0.0) return 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(epoch) / decay);
}

double epoch_beta(const FocusEConfig& config, std::size_t epoch) {
  if (!config.enabled) return 1.0;
  if (config.fixed_beta) return *config.fixed_beta;
  return beta_schedule(epoch, config.decay);
}

}  // namespace kgex
