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

#include <gtest/gtest.h>

#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "semglove/error.hpp"

namespace semglove {
namespace {

CoocMatrix build(const std::vector<std::vector<WordId>>& sentences, std::uint32_t v, int window,
                 bool symmetric = true, int threads = 1) {
    WindowConfig cfg;
    cfg.window = window;
    cfg.symmetric = symmetric;
    return build_window_cooc(std::span<const std::vector<WordId>>(sentences), v, cfg, threads);
}

TEST(WindowTest, DistanceWeights) {
    // king _ _ _ queen
    const auto m = build({{0, 2, 3, 4, 1}}, 5, 5);
    EXPECT_EQ(m.get(0, 1), 0.25);
    EXPECT_EQ(m.get(1, 0), 0.25);
    EXPECT_EQ(m.get(0, 2), 1.0);
    EXPECT_EQ(m.get(2, 3), 1.0);
    EXPECT_EQ(m.get(2, 1), 1.0 / 3.0);
}

TEST(WindowTest, WindowClipsAtDistanceAndSentence) {
    const auto m = build({{0, 1, 2, 3}, {4, 0}}, 5, 2);
    EXPECT_FALSE(m.contains(0, 3));
    EXPECT_EQ(m.get(0, 2), 0.5);
    // 3 and 4 are adjacent only across a line break
    EXPECT_FALSE(m.contains(3, 4));
    EXPECT_EQ(m.get(4, 0), 1.0);
}

TEST(WindowTest, OovKeepsPositionAndSamePairsSkipped) {
    const auto m = build({{0, kOov, 1, 0}}, 2, 5);
    // 0 at 0 and 1 at 2: distance 2 despite the OOV gap; 1 and the second 0 adjacent
    EXPECT_EQ(m.get(0, 1), 0.5 + 1.0);
    EXPECT_EQ(m.get(1, 0), 1.5);
    EXPECT_EQ(m.nnz(), 2u);
}

TEST(WindowTest, LeftContextOnly) {
    const auto m = build({{0, 1, 2}}, 3, 5, false);
    EXPECT_EQ(m.get(1, 0), 1.0);
    EXPECT_EQ(m.get(2, 0), 0.5);
    EXPECT_EQ(m.get(2, 1), 1.0);
    EXPECT_FALSE(m.contains(0, 1));
    EXPECT_EQ(m.nnz(), 3u);
}

TEST(WindowTest, RejectsZeroWindow) {
    EXPECT_THROW(build({{0, 1}}, 2, 0), InvalidArgument);
}

TEST(WindowTest, RepeatedLinesMatchOracle) {
    const std::vector<std::vector<WordId>> s(3, {0, 1, 2, 0, 1, 2});
    const auto m = build(s, 3, 2);
    EXPECT_EQ(testing::to_map(m), testing::window_oracle(s, 2, true));
    // a b c a b c: (a,b) at distances 1 (x2) and 2 (once, b..a), per line
    EXPECT_EQ(m.get(0, 1), 3 * (1.0 + 1.0 + 0.5));
}

TEST(WindowTest, StreamingCorpus) {
    const auto vocab = Vocabulary::from_entries({{"a", 3}, {"b", 2}});
    std::istringstream corpus("a b x a\n\nb a\n");
    WindowConfig cfg;
    cfg.window = 3;
    const auto m = build_window_cooc(corpus, vocab, cfg, 1);
    EXPECT_EQ(m.get(0, 1), 1.0 + 0.5 + 1.0);
    EXPECT_EQ(m.get(1, 0), 1.0 + 0.5 + 1.0);
    EXPECT_EQ(m.nnz(), 2u);
}

class WindowPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(WindowPropertyTest, OracleSymmetryAndSharding) {
    testing::Rng rng(static_cast<std::uint64_t>(GetParam()));
    const auto sentences = testing::random_sentences(rng, 60, 30, 0, 25, 0.1);
    for (int window : {1, 2, 3, 5, 8}) {
        for (bool symmetric : {true, false}) {
            const auto m = build(sentences, 30, window, symmetric);
            EXPECT_EQ(testing::to_map(m), testing::window_oracle(sentences, window, symmetric));
            for (const auto& r : m.entries()) {
                EXPECT_GE(r.x, 1.0 / window);
                if (symmetric) {
                    EXPECT_EQ(r.x, m.get(r.j, r.i));
                }
            }
            for (int threads : {2, 3, 7}) {
                EXPECT_TRUE(approx_equal(build(sentences, 30, window, symmetric, threads), m, 1e-9))
                    << threads;
            }
        }
    }
}

TEST_P(WindowPropertyTest, DoublingTheCorpusDoublesEntries) {
    testing::Rng rng(static_cast<std::uint64_t>(GetParam()) + 1000);
    const auto sentences = testing::random_sentences(rng, 40, 20, 0, 20);
    auto doubled = sentences;
    doubled.insert(doubled.end(), sentences.begin(), sentences.end());
    // weights 1 and 1/2 are dyadic, so every partial sum is exact
    const auto m = build(sentences, 20, 2);
    const auto m2 = build(doubled, 20, 2);
    ASSERT_EQ(m2.nnz(), m.nnz());
    for (const auto& r : m.entries()) {
        EXPECT_EQ(m2.get(r.i, r.j), 2.0 * r.x);
    }
    // with 1/3 and 1/5 in play the sums round differently, so compare loosely
    const auto w = build(sentences, 20, 5);
    const auto w2 = build(doubled, 20, 5);
    for (const auto& r : w.entries()) {
        EXPECT_NEAR(w2.get(r.i, r.j), 2.0 * r.x, 1e-12 * r.x);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, WindowPropertyTest, ::testing::Range(0, 10));

}  // namespace
}  // namespace semglove
