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

#include "semglove/cooc_mlm.hpp"

#include <algorithm>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "semglove/error.hpp"
#include "semglove/parallel.hpp"

namespace semglove {

namespace {

constexpr std::size_t kBatchRecords = 1024;

struct TokenCount {
    TokenId token;
    std::uint32_t mult;
};

// Subwords of every vocabulary word, grouped by token with multiplicity, and
// the inverted index token -> words containing it.
struct SubwordIndex {
    std::vector<std::vector<TokenCount>> word_tokens;
    std::vector<std::uint32_t> word_pieces;  // m, counting repeats
    std::vector<std::vector<std::pair<WordId, std::uint32_t>>> token_words;

    SubwordIndex(const Vocabulary& vocab, const SubwordLexicon& lex) {
        const std::size_t v = vocab.size();
        word_tokens.resize(v);
        word_pieces.resize(v);
        TokenId max_token = 0;
        for (std::size_t w = 0; w < v; ++w) {
            const auto* pieces = lex.find(vocab.word(static_cast<WordId>(w)));
            if (pieces == nullptr) {
                throw InvalidArgument("word '" + vocab.word(static_cast<WordId>(w)) +
                                      "' is missing from the subword lexicon");
            }
            std::vector<TokenId> sorted(pieces->begin(), pieces->end());
            std::sort(sorted.begin(), sorted.end());
            for (TokenId t : sorted) {
                if (!word_tokens[w].empty() && word_tokens[w].back().token == t) {
                    ++word_tokens[w].back().mult;
                } else {
                    word_tokens[w].push_back({t, 1});
                }
                max_token = std::max(max_token, t);
            }
            word_pieces[w] = static_cast<std::uint32_t>(pieces->size());
        }
        token_words.resize(v == 0 ? 0 : static_cast<std::size_t>(max_token) + 1);
        for (std::size_t w = 0; w < v; ++w) {
            for (const auto& tc : word_tokens[w]) {
                token_words[tc.token].emplace_back(static_cast<WordId>(w), tc.mult);
            }
        }
    }
};

// Per-thread dense accumulator over target words.
struct RowScratch {
    std::vector<double> acc;
    std::vector<WordId> touched;

    explicit RowScratch(std::size_t v) : acc(v, 0.0) {}
};

void convert_target(WordId i, const BpeCoocMatrix& bpe, const SubwordIndex& index,
                    RowScratch& scratch, CoocMatrix& out) {
    for (const auto& src : index.word_tokens[i]) {
        for (const auto& rec : bpe.row(src.token)) {
            if (rec.j >= index.token_words.size()) {
                continue;
            }
            for (const auto& [j, mult] : index.token_words[rec.j]) {
                if (scratch.acc[j] == 0.0) {
                    scratch.touched.push_back(j);
                }
                scratch.acc[j] += static_cast<double>(src.mult) * static_cast<double>(mult) * rec.x;
            }
        }
    }
    std::sort(scratch.touched.begin(), scratch.touched.end());
    const double m = index.word_pieces[i];
    for (WordId j : scratch.touched) {
        if (j != i) {
            const double n = index.word_pieces[j];
            out.accumulate(i, j, scratch.acc[j] / (m * n));
        }
        scratch.acc[j] = 0.0;
    }
    scratch.touched.clear();
}

}  // namespace

void MlmConfig::validate(std::uint32_t dump_top_k) const {
    if (top_tokens < 1) {
        throw InvalidArgument("top_tokens must be >= 1");
    }
    if (static_cast<std::uint32_t>(top_tokens) > dump_top_k) {
        throw ConfigError("top_tokens = " + std::to_string(top_tokens) +
                          " exceeds the dump's top_k = " + std::to_string(dump_top_k));
    }
}

std::uint32_t BpeCoocMatrix::bpe_vocab_size() const {
    std::uint32_t n = 0;
    for (const auto& r : counts_.entries()) {
        n = std::max({n, r.i + 1, r.j + 1});
    }
    return n;
}

namespace {

void add_record(const MlmRecord& rec, const MlmConfig& cfg, CoocMatrix& acc) {
    const std::size_t l = rec.num_tokens();
    if (l == 0) {
        return;
    }
    const std::size_t stride = rec.predictions.size() / l;
    const std::size_t take = std::min(stride, static_cast<std::size_t>(cfg.top_tokens));
    for (std::size_t i = 0; i < l; ++i) {
        const TokenId source = rec.bpe_ids[i];
        const Prediction* preds = rec.predictions.data() + i * stride;
        double best = 0.0;
        std::size_t rank = 0;
        for (std::size_t r = 0; r < take; ++r) {
            if (preds[r].token == source || !(preds[r].logit > 0.0)) {
                continue;
            }
            ++rank;
            if (rank == 1) {
                best = preds[r].logit;
            }
            const double w = cfg.distance == Distance::kDivision
                                 ? preds[r].logit / best
                                 : 1.0 / static_cast<double>(rank);
            acc.accumulate(source, preds[r].token, w);
        }
    }
}

}  // namespace

void accumulate_bpe_cooc(const MlmRecord& rec, const MlmConfig& cfg, BpeCoocMatrix& acc) {
    add_record(rec, cfg, acc.counts());
}

CoocMatrix bpe_to_word_cooc_serial(const BpeCoocMatrix& bpe, const Vocabulary& vocab,
                                   const SubwordLexicon& lex) {
    const SubwordIndex index(vocab, lex);
    const auto v = static_cast<std::uint32_t>(vocab.size());
    CoocMatrix out(v);
    RowScratch scratch(v);
    for (WordId i = 0; i < v; ++i) {
        convert_target(i, bpe, index, scratch, out);
    }
    out.compact();
    return out;
}

CoocMatrix bpe_to_word_cooc(const BpeCoocMatrix& bpe, const Vocabulary& vocab,
                            const SubwordLexicon& lex, int threads) {
    if (threads <= 1) {
        return bpe_to_word_cooc_serial(bpe, vocab, lex);
    }
    const SubwordIndex index(vocab, lex);
    const auto v = static_cast<std::uint32_t>(vocab.size());
    bpe.compact();

    std::vector<CoocMatrix> partial(static_cast<std::size_t>(threads), CoocMatrix(v));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        const auto slot = static_cast<std::size_t>(tid);
        RowScratch scratch(v);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(v); ++i) {
            if (errors[slot]) {
                continue;
            }
            try {
                convert_target(static_cast<WordId>(i), bpe, index, scratch, partial[slot]);
            } catch (...) {
                errors[slot] = std::current_exception();
            }
        }
        partial[slot].compact();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    CoocMatrix out = std::move(partial[0]);
    for (std::size_t t = 1; t < partial.size(); ++t) {
        out.merge(partial[t]);
    }
    return out;
}

BpeCoocMatrix build_bpe_cooc(std::span<const MlmRecord> records, const MlmConfig& cfg, int threads) {
    BpeCoocMatrix out;
    if (threads <= 1) {
        for (const auto& rec : records) {
            accumulate_bpe_cooc(rec, cfg, out);
        }
        out.compact();
        return out;
    }
    out.counts() = sharded_accumulate(records.size(), 0, threads,
                                      [&](std::size_t k, CoocMatrix& shard) {
                                          add_record(records[k], cfg, shard);
                                      });
    return out;
}

CoocMatrix build_mlm_cooc(DumpReader& dump, const Vocabulary& vocab, const SubwordLexicon& lex,
                          const MlmConfig& cfg, int threads) {
    if (dump.header().mode != DumpMode::kMlm) {
        throw ConfigError(std::string("cooc-mlm needs an MLM dump, got ") +
                          to_string(dump.header().mode));
    }
    cfg.validate(dump.header().top_k);

    BpeCoocMatrix bpe;
    std::vector<MlmRecord> batch;
    auto flush = [&] {
        if (threads <= 1) {
            for (const auto& rec : batch) {
                accumulate_bpe_cooc(rec, cfg, bpe);
            }
        } else if (!batch.empty()) {
            bpe.merge(build_bpe_cooc(batch, cfg, threads));
        }
        batch.clear();
    };
    while (auto rec = dump.next_mlm()) {
        batch.push_back(std::move(*rec));
        if (batch.size() >= kBatchRecords) {
            flush();
        }
    }
    flush();
    return bpe_to_word_cooc(bpe, vocab, lex, threads);
}

}  // namespace semglove
