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

#include "semglove/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "generators.hpp"
#include "semglove/error.hpp"
#include "temp_dir.hpp"

namespace semglove {
namespace {

WordVectors table(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    WordVectors v(rows.front().second.size());
    for (const auto& [w, x] : rows) {
        v.add(w, x);
    }
    return v;
}

// Entries uniform in [-1, 1]; cosines stay well away from exact ties.
WordVectors plain_vectors(testing::Rng& rng, std::size_t size, std::size_t dim) {
    WordVectors v(dim);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < size; ++i) {
        for (auto& x : row) {
            x = testing::uniform_real(rng, -1.0, 1.0);
        }
        v.add("w" + std::to_string(i), row);
    }
    return v;
}

SimilarityDataset dataset(const std::vector<SimilarityPair>& pairs) {
    return {"toy", pairs};
}

TEST(CosineTest, Examples) {
    const std::vector<double> u{1.0, 2.0, -3.0};
    const std::vector<double> neg{-1.0, -2.0, 3.0};
    EXPECT_DOUBLE_EQ(cosine(u, u), 1.0);
    EXPECT_DOUBLE_EQ(cosine(u, neg), -1.0);
    EXPECT_EQ(cosine(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}), 0.0);
    EXPECT_NEAR(cosine(std::vector<double>{3.0, 4.0}, std::vector<double>{1.0, 0.0}), 0.6, 1e-15);
}

TEST(CosineTest, Errors) {
    EXPECT_THROW(cosine(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(cosine(std::vector<double>{1.0}, std::vector<double>{1.0, 0.0}), InvalidArgument);
}

TEST(CosineTest, BoundedOnRandomVectors) {
    testing::Rng rng(1);
    for (int k = 0; k < 1000; ++k) {
        std::vector<double> u(5);
        std::vector<double> v(5);
        for (int d = 0; d < 5; ++d) {
            u[d] = testing::uniform_real(rng, -1.0, 1.0);
            v[d] = testing::uniform_real(rng, -1.0, 1.0);
        }
        const double c = cosine(u, v);
        EXPECT_GE(c, -1.0);
        EXPECT_LE(c, 1.0);
        EXPECT_EQ(c, cosine(v, u));
    }
}

TEST(RankTest, AverageRanksWithTies) {
    const std::vector<double> xs{10.0, 20.0, 10.0, 5.0, 20.0, 20.0};
    EXPECT_EQ(average_ranks(xs), (std::vector<double>{2.5, 5.0, 2.5, 1.0, 5.0, 5.0}));
}

TEST(SpearmanTest, UnitValues) {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> up{0.1, 0.5, 0.7, 2.0, 9.0};
    const std::vector<double> down{9.0, 2.0, 0.7, 0.5, 0.1};
    EXPECT_EQ(spearman(xs, up), 1.0);
    EXPECT_EQ(spearman(xs, down), -1.0);
    EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}), 0.8, 1e-12);
}

TEST(SpearmanTest, TiesUseMeanRanks) {
    // ranks x = (1, 2.5, 2.5, 4), y = (1, 2, 3, 4); Pearson by hand = 0.9486832980505138
    const std::vector<double> xs{1.0, 2.0, 2.0, 3.0};
    const std::vector<double> ys{1.0, 2.0, 3.0, 4.0};
    EXPECT_NEAR(spearman(xs, ys), 3.0 / std::sqrt(10.0), 1e-12);
}

TEST(SpearmanTest, Errors) {
    EXPECT_THROW(spearman(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{1.0, 2.0, 3.0}),
                 InvalidArgument);
    EXPECT_THROW(spearman(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
    EXPECT_THROW(spearman(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}), InvalidArgument);
    EXPECT_THROW(spearman(std::vector<double>{1.0, NAN}, std::vector<double>{1.0, 2.0}),
                 InvalidArgument);
}

TEST(SpearmanTest, MatchesTieFreeFormula) {
    testing::Rng rng(2);
    for (int k = 0; k < 200; ++k) {
        const int n = testing::uniform_int(rng, 2, 30);
        std::vector<double> xs(n);
        std::vector<double> ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = testing::uniform_real(rng, 0.0, 1.0);
            ys[i] = testing::uniform_real(rng, 0.0, 1.0);
        }
        const auto rx = average_ranks(xs);
        const auto ry = average_ranks(ys);
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) {
            d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
        }
        const double nn = n;
        const double expected = 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
        const double rho = spearman(xs, ys);
        EXPECT_NEAR(rho, expected, 1e-12);
        EXPECT_NEAR(spearman(ys, xs), rho, 1e-15);
    }
}

TEST(DatasetTest, Parse) {
    std::istringstream in("# header\nTiger\tcat\t7.35\n\nbook paper  7.46\n");
    const auto ds = read_dataset(in, "ws");
    EXPECT_EQ(ds.name, "ws");
    ASSERT_EQ(ds.pairs.size(), 2u);
    EXPECT_EQ(ds.pairs[0].first, "tiger");
    EXPECT_EQ(ds.pairs[0].second, "cat");
    EXPECT_DOUBLE_EQ(ds.pairs[0].score, 7.35);
    EXPECT_EQ(ds.pairs[1].second, "paper");
}

TEST(DatasetTest, Errors) {
    std::istringstream two("a b\n");
    EXPECT_THROW(read_dataset(two, "x"), ParseError);
    std::istringstream bad("a b c\n");
    EXPECT_THROW(read_dataset(bad, "x"), ParseError);
    std::istringstream inf("a b inf\n");
    EXPECT_THROW(read_dataset(inf, "x"), ParseError);
    std::istringstream empty("# nothing\n");
    EXPECT_THROW(read_dataset(empty, "x"), FormatError);
    try {
        std::istringstream third("a b 1\nc d 2\ne f\n");
        read_dataset(third, "x");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(DatasetTest, LoadUsesStem) {
    testing::TempDir dir;
    testing::write_text(dir / "ws353s.tsv", "a\tb\t1\n");
    EXPECT_EQ(load_dataset(dir / "ws353s.tsv").name, "ws353s");
    EXPECT_THROW(load_dataset(dir / "missing.tsv"), IoError);
}

TEST(EvaluateTest, MatchingOrderGivesOne) {
    const auto v = table({{"a", {1.0, 0.0}}, {"b", {1.0, 0.2}}, {"c", {0.0, 1.0}}, {"d", {-1.0, 0.1}}});
    const auto r = evaluate(v, dataset({{"a", "b", 9.0}, {"a", "c", 5.0}, {"a", "d", 1.0}}));
    EXPECT_EQ(r.spearman, 1.0);
    EXPECT_EQ(r.covered, 3u);
    EXPECT_EQ(r.total, 3u);
}

TEST(EvaluateTest, SkipsOov) {
    const auto v = table({{"a", {1.0, 0.0}}, {"b", {1.0, 0.2}}, {"c", {0.0, 1.0}}});
    const auto r = evaluate(v, dataset({{"a", "b", 9.0}, {"a", "zzz", 4.0}, {"a", "c", 5.0}}));
    EXPECT_EQ(r.spearman, 1.0);
    EXPECT_EQ(r.covered, 2u);
    EXPECT_EQ(r.total, 3u);
    EXPECT_EQ(format_report({"toy", 0.5, 2, 3}), "toy 0.5 2/3");
}

TEST(EvaluateTest, AllOovRaises) {
    const auto v = table({{"a", {1.0, 0.0}}});
    try {
        evaluate(v, dataset({{"x", "y", 1.0}, {"p", "q", 2.0}}));
        FAIL();
    } catch (const InsufficientCoverage& e) {
        EXPECT_EQ(e.covered(), 0u);
    }
}

TEST(EvaluateTest, HandOracle) {
    // cosines: ab 0, ac 1/sqrt2, ad -1, be 0.8, ce 7/(5 sqrt2), ae 0.6
    // model ranks (2,4,1,5,6,3), human ranks (4,3,1,5,6,2), sum d^2 = 6
    // rho = 1 - 6*6 / (6*35) = 29/35
    const auto v = table({{"a", {1.0, 0.0}},
                          {"b", {0.0, 1.0}},
                          {"c", {1.0, 1.0}},
                          {"d", {-1.0, 0.0}},
                          {"e", {3.0, 4.0}}});
    const auto ds = dataset({{"a", "b", 5.0},
                             {"a", "c", 4.0},
                             {"a", "d", 1.0},
                             {"b", "e", 6.0},
                             {"c", "e", 10.0},
                             {"a", "e", 3.0}});
    EXPECT_NEAR(evaluate(v, ds).spearman, 29.0 / 35.0, 1e-12);
}

std::vector<std::vector<double>> random_rotation(testing::Rng& rng, std::size_t dim) {
    // Gram-Schmidt on a random basis
    std::vector<std::vector<double>> q;
    while (q.size() < dim) {
        std::vector<double> v(dim);
        for (auto& x : v) {
            x = testing::uniform_real(rng, -1.0, 1.0);
        }
        for (const auto& b : q) {
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                dot += v[d] * b[d];
            }
            for (std::size_t d = 0; d < dim; ++d) {
                v[d] -= dot * b[d];
            }
        }
        double norm = 0.0;
        for (double x : v) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-6) {
            continue;
        }
        for (auto& x : v) {
            x /= norm;
        }
        q.push_back(std::move(v));
    }
    return q;
}

TEST(EvaluateTest, InvariantUnderScaleAndRotation) {
    testing::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 6;
        const auto v = plain_vectors(rng, 30, dim);
        SimilarityDataset ds{"r", {}};
        for (int k = 0; k < 60; ++k) {
            const auto a = static_cast<std::size_t>(testing::uniform_int(rng, 0, 29));
            const auto b = static_cast<std::size_t>(testing::uniform_int(rng, 0, 29));
            if (a == b) {
                continue;  // self pairs tie at 1 and rounding can split them
            }
            ds.pairs.push_back({v.word(a), v.word(b), testing::uniform_real(rng, 0.0, 10.0)});
        }
        const double base = evaluate(v, ds).spearman;

        const double s = testing::uniform_real(rng, 0.01, 100.0);
        const auto rot = random_rotation(rng, dim);
        WordVectors scaled(dim);
        WordVectors rotated(dim);
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::vector<double> a(dim);
            std::vector<double> b(dim, 0.0);
            for (std::size_t d = 0; d < dim; ++d) {
                a[d] = s * v.row(i)[d];
                for (std::size_t k = 0; k < dim; ++k) {
                    b[d] += rot[d][k] * v.row(i)[k];
                }
            }
            scaled.add(v.word(i), a);
            rotated.add(v.word(i), b);
        }
        EXPECT_NEAR(evaluate(scaled, ds).spearman, base, 1e-12);
        EXPECT_NEAR(evaluate(rotated, ds).spearman, base, 1e-12);
    }
}

TEST(EvaluateTest, InvariantUnderMonotoneScoreTransform) {
    testing::Rng rng(8);
    const auto v = plain_vectors(rng, 20, 4);
    SimilarityDataset ds{"r", {}};
    for (int k = 0; k < 40; ++k) {
        ds.pairs.push_back({v.word(k % 20), v.word((k * 7 + 3) % 20), testing::uniform_real(rng, 0.0, 10.0)});
    }
    auto transformed = ds;
    for (auto& p : transformed.pairs) {
        p.score = std::exp(p.score) * 3.0 - 1.0;
    }
    EXPECT_EQ(evaluate(v, ds).spearman, evaluate(v, transformed).spearman);
}

TEST(NearestTest, OrdersBySimilarity) {
    const auto v = table({{"king", {1.0, 0.0}},
                          {"queen", {0.9, 0.1}},
                          {"crown", {0.5, 0.5}},
                          {"apple", {-1.0, 0.2}},
                          {"void", {0.0, 0.0}},
                          {"queen2", {0.9, 0.1}}});
    const auto n = nearest(v, "king", 3);
    ASSERT_EQ(n.size(), 3u);
    EXPECT_EQ(n[0].word, "queen");
    EXPECT_EQ(n[1].word, "queen2");
    EXPECT_EQ(n[2].word, "crown");
    EXPECT_NEAR(n[2].similarity, std::sqrt(0.5), 1e-15);
    EXPECT_EQ(nearest(v, "king", 100).size(), 4u);
    EXPECT_THROW(nearest(v, "prince", 3), InvalidArgument);
}

}  // namespace
}  // namespace semglove
