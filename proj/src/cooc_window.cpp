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

#include "semglove/cooc_window.hpp"

#include <algorithm>
#include <istream>
#include <string>

#include "semglove/error.hpp"
#include "semglove/parallel.hpp"

namespace semglove {

namespace {

constexpr std::size_t kBatchTokens = std::size_t{1} << 22;

}  // namespace

void WindowConfig::validate() const {
    if (window < 1) {
        throw InvalidArgument("window must be >= 1");
    }
}

void accumulate_window(std::span<const WordId> ids, const WindowConfig& cfg, CoocMatrix& out) {
    // Each position pair (a, b), a < b, is visited once and emits both
    // directions back to back, so X_ij and X_ji see the same sequence of
    // additions and stay bit-identical.
    const std::size_t n = ids.size();
    const auto s = static_cast<std::size_t>(cfg.window);
    for (std::size_t a = 0; a < n; ++a) {
        const WordId left = ids[a];
        if (left == kOov) {
            continue;
        }
        const std::size_t hi = std::min(n - 1, a + s);
        for (std::size_t b = a + 1; b <= hi; ++b) {
            const WordId right = ids[b];
            if (right == kOov || right == left) {
                continue;
            }
            const double w = 1.0 / static_cast<double>(b - a);
            if (cfg.symmetric) {
                out.accumulate(left, right, w);
            }
            out.accumulate(right, left, w);
        }
    }
}

CoocMatrix build_window_cooc_serial(std::span<const std::vector<WordId>> sentences,
                                    std::uint32_t vocab_size, const WindowConfig& cfg) {
    cfg.validate();
    CoocMatrix m(vocab_size);
    for (const auto& ids : sentences) {
        accumulate_window(ids, cfg, m);
    }
    m.compact();
    return m;
}

CoocMatrix build_window_cooc(std::span<const std::vector<WordId>> sentences,
                             std::uint32_t vocab_size, const WindowConfig& cfg, int threads) {
    if (threads <= 1) {
        return build_window_cooc_serial(sentences, vocab_size, cfg);
    }
    cfg.validate();
    return sharded_accumulate(sentences.size(), vocab_size, threads,
                              [&](std::size_t k, CoocMatrix& shard) {
                                  accumulate_window(sentences[k], cfg, shard);
                              });
}

CoocMatrix build_window_cooc(std::span<const Sentence> sentences, std::uint32_t vocab_size,
                             const WindowConfig& cfg, int threads) {
    std::vector<std::vector<WordId>> ids;
    ids.reserve(sentences.size());
    for (const auto& s : sentences) {
        ids.push_back(s.ids);
    }
    return build_window_cooc(std::span<const std::vector<WordId>>(ids), vocab_size, cfg, threads);
}

CoocMatrix build_window_cooc(std::istream& corpus, const Vocabulary& vocab,
                             const WindowConfig& cfg, int threads) {
    cfg.validate();
    const auto vocab_size = static_cast<std::uint32_t>(vocab.size());
    CoocMatrix total(vocab_size);
    std::vector<std::vector<WordId>> batch;
    std::size_t batch_tokens = 0;
    auto flush = [&] {
        if (batch.empty()) {
            return;
        }
        if (threads <= 1) {
            for (const auto& ids : batch) {
                accumulate_window(ids, cfg, total);
            }
        } else {
            total.merge(build_window_cooc(std::span<const std::vector<WordId>>(batch), vocab_size,
                                          cfg, threads));
        }
        batch.clear();
        batch_tokens = 0;
    };

    std::string line;
    while (std::getline(corpus, line)) {
        batch.push_back(encode_line(line, vocab));
        batch_tokens += batch.back().size();
        if (batch_tokens >= kBatchTokens) {
            flush();
        }
    }
    if (corpus.bad()) {
        throw IoError("error while reading corpus");
    }
    flush();
    total.compact();
    return total;
}

}  // namespace semglove
