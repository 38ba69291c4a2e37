/*
 * Copyright 2026 The SemGloVe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Planted-solution co-occurrence problems for the trainer tests, the
// acceptance binary and the benchmarks.

#ifndef SEMGLOVE_TESTS_PLANTED_HPP
#define SEMGLOVE_TESTS_PLANTED_HPP

#include <cstdint>
#include <vector>

#include "semglove/cooc_matrix.hpp"

namespace semglove::testing {

/// X_ij = exp(u_i . v_j + c_i + c'_j) for about `entries` random off-diagonal
/// pairs. Factors and biases are drawn from N(0, scale^2); scale <= 0 picks
/// 1/sqrt(dim), which gives ground-truth vectors of about unit norm. Records
/// come in random order.
std::vector<CoocRecord> planted_problem(std::uint64_t seed, std::uint32_t vocab_size, int dim,
                                        std::size_t entries, double scale = 0.0);

}  // namespace semglove::testing

#endif  // SEMGLOVE_TESTS_PLANTED_HPP
