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

#ifndef SEMGLOVE_PARALLEL_HPP
#define SEMGLOVE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

#include "semglove/cooc_matrix.hpp"

namespace semglove {

/// Whether the library was compiled with OpenMP.
bool openmp_enabled() noexcept;

/// Runs fn(item, shard) for item in [0, n_items), splitting the items into
/// `threads` contiguous blocks with one private accumulator each. Shards are
/// merged in block order. The first exception raised by any worker is
/// rethrown on the calling thread.
template <typename Fn>
CoocMatrix sharded_accumulate(std::size_t n_items, std::uint32_t vocab_size, int threads, Fn&& fn) {
    const int shards = std::max(1, threads);
    std::vector<CoocMatrix> partial(static_cast<std::size_t>(shards), CoocMatrix(vocab_size));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));

#pragma omp parallel for num_threads(shards) schedule(static, 1)
    for (int s = 0; s < shards; ++s) {
        const auto us = static_cast<std::size_t>(s);
        const std::size_t begin = n_items * us / static_cast<std::size_t>(shards);
        const std::size_t end = n_items * (us + 1) / static_cast<std::size_t>(shards);
        try {
            for (std::size_t k = begin; k < end; ++k) {
                fn(k, partial[us]);
            }
            partial[us].compact();
        } catch (...) {
            errors[us] = std::current_exception();
        }
    }

    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    CoocMatrix merged = std::move(partial[0]);
    for (std::size_t s = 1; s < partial.size(); ++s) {
        merged.merge(partial[s]);
    }
    return merged;
}

}  // namespace semglove

#endif  // SEMGLOVE_PARALLEL_HPP
