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

#ifndef SEMGLOVE_COOC_WINDOW_HPP
#define SEMGLOVE_COOC_WINDOW_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "semglove/cooc_matrix.hpp"
#include "semglove/vocab.hpp"

namespace semglove {

struct WindowConfig {
    int window = 5;          // words on each side
    bool symmetric = true;   // false: left context only

    void validate() const;
};

/// Harmonic window counting over one sentence: every in-vocabulary pair at
/// distance 1..window adds 1/distance to X(target, context). OOV tokens
/// occupy positions but emit nothing; windows never cross the sentence.
void accumulate_window(std::span<const WordId> ids, const WindowConfig& cfg, CoocMatrix& out);

/// Reference implementation: one thread, additions in corpus order.
CoocMatrix build_window_cooc_serial(std::span<const std::vector<WordId>> sentences,
                                    std::uint32_t vocab_size, const WindowConfig& cfg);

/// Sentence-parallel build. Each thread fills a private matrix over a
/// contiguous block of sentences; blocks are merged in order. threads <= 1
/// runs the serial reference.
CoocMatrix build_window_cooc(std::span<const std::vector<WordId>> sentences,
                             std::uint32_t vocab_size, const WindowConfig& cfg, int threads);

CoocMatrix build_window_cooc(std::span<const Sentence> sentences, std::uint32_t vocab_size,
                             const WindowConfig& cfg, int threads = 1);

/// Streams a corpus (one sentence per line) in batches.
CoocMatrix build_window_cooc(std::istream& corpus, const Vocabulary& vocab,
                             const WindowConfig& cfg, int threads = 1);

}  // namespace semglove

#endif  // SEMGLOVE_COOC_WINDOW_HPP
