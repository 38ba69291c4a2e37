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

// Serial reference kernels against their OpenMP counterparts. Arg(0) is the
// serial path; other args are thread counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "generators.hpp"
#include "planted.hpp"
#include "semglove/cooc_mlm.hpp"
#include "semglove/cooc_san.hpp"
#include "semglove/cooc_window.hpp"
#include "semglove/trainer.hpp"

namespace semglove {
namespace {

const std::vector<std::vector<WordId>>& corpus() {
    static const auto sentences = [] {
        testing::Rng rng(1);
        return testing::random_sentences(rng, 20000, 5000, 5, 40, 0.02);
    }();
    return sentences;
}

void BM_Window(benchmark::State& state) {
    const auto threads = static_cast<int>(state.range(0));
    WindowConfig cfg;
    cfg.window = 10;
    std::size_t tokens = 0;
    for (const auto& s : corpus()) {
        tokens += s.size();
    }
    for (auto _ : state) {
        const auto m = threads == 0 ? build_window_cooc_serial(corpus(), 5000, cfg)
                                    : build_window_cooc(corpus(), 5000, cfg, threads);
        benchmark::DoNotOptimize(m.nnz());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens));
}
BENCHMARK(BM_Window)->Arg(0)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_San(benchmark::State& state) {
    const auto threads = static_cast<int>(state.range(0));
    static const auto data = [] {
        testing::Rng rng(2);
        std::pair<std::vector<SanRecord>, std::vector<std::vector<WordId>>> d;
        for (int k = 0; k < 2000; ++k) {
            d.first.push_back(testing::random_san_record(rng, 30, 3, 64));
            std::vector<WordId> ids(d.first.back().num_words());
            for (auto& w : ids) {
                w = static_cast<WordId>(testing::uniform_int(rng, 0, 999));
            }
            d.second.push_back(std::move(ids));
        }
        return d;
    }();
    SanConfig cfg;
    for (auto _ : state) {
        const auto m = threads == 0 ? build_san_cooc_serial(data.first, data.second, 1000, cfg)
                                    : build_san_cooc(data.first, data.second, 1000, cfg, threads);
        benchmark::DoNotOptimize(m.nnz());
    }
}
BENCHMARK(BM_San)->Arg(0)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MlmToWords(benchmark::State& state) {
    const auto threads = static_cast<int>(state.range(0));
    static const auto data = [] {
        testing::Rng rng(3);
        auto vocab = testing::synthetic_vocab(3000);
        auto lex = testing::random_lexicon(rng, vocab, 3, 4000);
        BpeCoocMatrix m;
        for (int k = 0; k < 400000; ++k) {
            const auto s = static_cast<TokenId>(testing::uniform_int(rng, 0, 3999));
            const auto t = static_cast<TokenId>(testing::uniform_int(rng, 0, 3999));
            if (s != t) {
                m.accumulate(s, t, testing::uniform_real(rng, 0.01, 1.0));
            }
        }
        m.compact();
        return std::tuple{std::move(vocab), std::move(lex), std::move(m)};
    }();
    const auto& [vocab, lex, m] = data;
    for (auto _ : state) {
        const auto x = threads == 0 ? bpe_to_word_cooc_serial(m, vocab, lex)
                                    : bpe_to_word_cooc(m, vocab, lex, threads);
        benchmark::DoNotOptimize(x.nnz());
    }
}
BENCHMARK(BM_MlmToWords)->Arg(0)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
    const auto threads = static_cast<int>(state.range(0));
    static const auto records = testing::planted_problem(4, 2000, 50, 400000);
    TrainConfig cfg;
    cfg.dim = 50;
    cfg.threads = threads == 0 ? 1 : threads;
    auto emb = EmbeddingSet::initialize(2000, 50, 1);
    for (auto _ : state) {
        const double loss = threads == 0 ? train_epoch_serial(emb, records, cfg)
                                         : train_epoch(emb, records, cfg);
        benchmark::DoNotOptimize(loss);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * records.size()));
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace semglove

BENCHMARK_MAIN();
