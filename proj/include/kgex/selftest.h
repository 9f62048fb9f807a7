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

#ifndef KGEX_SELFTEST_H_
#define KGEX_SELFTEST_H_

#include <cstddef>
#include <cstdint>
#include <ostream>

namespace kgex {

struct SelftestSummary {
  std::size_t passed = 0;
  std::size_t failed = 0;
};

// Runs the built-in invariant checks (gradients, reductions, ranking and
// sampler contracts, aggregation identities) and logs one line per check.
SelftestSummary run_selftest(std::uint64_t seed, std::ostream& log);

}  // namespace kgex

#endif  // KGEX_SELFTEST_H_
