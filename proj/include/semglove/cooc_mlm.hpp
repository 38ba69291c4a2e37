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

// Co-occurrence counts distilled from masked-LM predictions.
//
// Stage 1 works on subword tokens: for every masked position the top
// predictions become context tokens of the token actually at that position,
// weighted by logit / best_logit (or 1 / rank). Stage 2 turns the subword
// matrix into word counts by averaging over all subword pairs of two words.

#ifndef SEMGLOVE_COOC_MLM_HPP
#define SEMGLOVE_COOC_MLM_HPP

#include <cstdint>
#include <span>

#include "semglove/cooc_matrix.hpp"
#include "semglove/cooc_san.hpp"
#include "semglove/dump_format.hpp"
#include "semglove/vocab.hpp"

namespace semglove {

struct MlmConfig {
    int top_tokens = 10;
    Distance distance = Distance::kDivision;

    /// dump_top_k is the number of predictions stored per position.
    void validate(std::uint32_t dump_top_k) const;
};

/// Subword-level co-occurrence counts, keyed (source token, context token).
class BpeCoocMatrix {
public:
    void accumulate(TokenId source, TokenId context, double w) { counts_.accumulate(source, context, w); }
    void merge(const BpeCoocMatrix& other) { counts_.merge(other.counts_); }

    double get(TokenId source, TokenId context) const { return counts_.get(source, context); }
    std::span<const CoocRecord> row(TokenId source) const { return counts_.row(source); }
    std::span<const CoocRecord> entries() const { return counts_.entries(); }
    std::size_t nnz() const { return counts_.nnz(); }
    void compact() const { counts_.compact(); }

    /// One past the largest token id present, 0 when empty.
    std::uint32_t bpe_vocab_size() const;

    const CoocMatrix& counts() const noexcept { return counts_; }
    CoocMatrix& counts() noexcept { return counts_; }

private:
    CoocMatrix counts_{0};
};

/// Adds one sentence. At each position the first cfg.top_tokens predictions
/// are taken, the masked token's own id and non-positive logits are dropped,
/// and the survivors are weighted against the best survivor.
void accumulate_bpe_cooc(const MlmRecord& rec, const MlmConfig& cfg, BpeCoocMatrix& acc);

/// Reference implementation of the word-level average, one thread.
CoocMatrix bpe_to_word_cooc_serial(const BpeCoocMatrix& bpe, const Vocabulary& vocab,
                                   const SubwordLexicon& lex);

/// Parallel over target words. Throws InvalidArgument naming the first
/// vocabulary word that has no lexicon entry.
CoocMatrix bpe_to_word_cooc(const BpeCoocMatrix& bpe, const Vocabulary& vocab,
                            const SubwordLexicon& lex, int threads = 1);

BpeCoocMatrix build_bpe_cooc(std::span<const MlmRecord> records, const MlmConfig& cfg, int threads = 1);

/// Streams an MLM dump through both stages.
CoocMatrix build_mlm_cooc(DumpReader& dump, const Vocabulary& vocab, const SubwordLexicon& lex,
                          const MlmConfig& cfg, int threads = 1);

}  // namespace semglove

#endif  // SEMGLOVE_COOC_MLM_HPP
