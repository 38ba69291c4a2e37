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

// Co-occurrence counts distilled from summed self-attention weights.
//
// Per sentence: subword attention is averaged into word-to-word attention
// inside a +-window neighbourhood, the strongest `select_top` neighbours of
// each target are kept, and each kept neighbour contributes
//   division: score / best_score      (best neighbour contributes exactly 1)
//   rank:     1 / rank
// to X(target, neighbour).

#ifndef SEMGLOVE_COOC_SAN_HPP
#define SEMGLOVE_COOC_SAN_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "semglove/cooc_matrix.hpp"
#include "semglove/dump_format.hpp"
#include "semglove/vocab.hpp"

namespace semglove {

enum class Distance { kDivision, kRank };

const char* to_string(Distance d) noexcept;
/// Accepts "division" or "rank"; throws InvalidArgument otherwise.
Distance parse_distance(std::string_view name);

struct SanConfig {
    int window = 5;
    int select_top = 5;
    Distance distance = Distance::kDivision;

    void validate() const;
};

struct PositionScore {
    std::uint32_t position = 0;  // word position of the context
    double score = 0.0;          // averaged attention, target -> context
};

/// Word-level attention for one sentence. rows[i] lists every word j with
/// 1 <= |i - j| <= window in ascending position order.
struct WordAttention {
    std::vector<std::vector<PositionScore>> rows;
};

/// Averages subword attention into word attention: the score from word i to
/// word j is the mean of attn(k, l) over the subwords k of i (as sources) and
/// l of j (as targets). When word_ids is non-empty, words mapped to kOov
/// are left out both as targets and as contexts.
WordAttention bpe_to_word_attention(const SanRecord& rec, int window,
                                    std::span<const WordId> word_ids = {});

struct Candidate {
    WordId word = kOov;
    std::uint32_t distance = 0;
    double score = 0.0;
};

struct ContextWeight {
    WordId word = kOov;
    double weight = 0.0;

    friend bool operator==(const ContextWeight&, const ContextWeight&) = default;
};

struct WordAttnRow {
    WordId target = kOov;
    std::vector<ContextWeight> contexts;  // best first
};

/// Keeps the cfg.select_top best candidates (score descending, then nearer,
/// then lower word id) and weights them by cfg.distance. Candidates with a
/// non-positive score are discarded first.
WordAttnRow select_and_weight(WordId target, std::vector<Candidate> candidates,
                              const SanConfig& cfg);

/// Adds one sentence's contributions. word_ids holds the vocabulary id of
/// every word in the record (kOov for unknown words).
void accumulate_san_record(const SanRecord& rec, std::span<const WordId> word_ids,
                           const SanConfig& cfg, CoocMatrix& out);

/// Reference implementation over in-memory records.
CoocMatrix build_san_cooc_serial(std::span<const SanRecord> records,
                                 std::span<const std::vector<WordId>> word_ids,
                                 std::uint32_t vocab_size, const SanConfig& cfg);

CoocMatrix build_san_cooc(std::span<const SanRecord> records,
                          std::span<const std::vector<WordId>> word_ids,
                          std::uint32_t vocab_size, const SanConfig& cfg, int threads);

/// Streams a SAN dump alongside the corpus it was extracted from. Records are
/// paired with the non-blank corpus lines in order; a record may cover a
/// prefix of its line (the extractor truncates long sentences).
CoocMatrix build_san_cooc(DumpReader& dump, std::istream& corpus, const Vocabulary& vocab,
                          const SanConfig& cfg, int threads = 1);

/// Keeps the (i, j) support of `support` with the values taken from
/// `values`. Pairs missing from `values` are dropped.
CoocMatrix cooc_intersect(const CoocMatrix& support, const CoocMatrix& values);

}  // namespace semglove

#endif  // SEMGLOVE_COOC_SAN_HPP
