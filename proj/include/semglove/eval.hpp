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

#ifndef SEMGLOVE_EVAL_HPP
#define SEMGLOVE_EVAL_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semglove/error.hpp"
#include "semglove/word_vectors.hpp"

namespace semglove {

/// Throws InvalidArgument for a size mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

/// 1-based ranks; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> xs);

/// Pearson correlation of average ranks. Throws InvalidArgument when the
/// lengths differ, fewer than 2 values are given, or either side is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct SimilarityPair {
    std::string first;
    std::string second;
    double score = 0.0;
};

struct SimilarityDataset {
    std::string name;
    std::vector<SimilarityPair> pairs;
};

/// "word1 word2 score" per line (tabs or spaces), '#' starts a comment line.
/// Words are lowercased. Throws ParseError on malformed lines and
/// FormatError when no pairs are present.
SimilarityDataset read_dataset(std::istream& in, std::string name);
/// Dataset name defaults to the file stem.
SimilarityDataset load_dataset(const std::filesystem::path& path);

struct EvalReport {
    std::string name;
    double spearman = 0.0;
    std::size_t covered = 0;
    std::size_t total = 0;
};

/// Thrown by evaluate when fewer than two pairs have both words in the vectors.
class InsufficientCoverage : public Error {
public:
    InsufficientCoverage(std::size_t covered, std::size_t total)
        : Error("coverage", "only " + std::to_string(covered) + " of " + std::to_string(total) +
                                " pairs are covered by the vectors"),
          covered_(covered) {}

    std::size_t covered() const noexcept { return covered_; }

private:
    std::size_t covered_;
};

/// Pairs with an out-of-vocabulary word are skipped and counted as uncovered.
EvalReport evaluate(const WordVectors& vectors, const SimilarityDataset& dataset);

/// "name rho covered/total"
std::string format_report(const EvalReport& report);

struct Neighbor {
    std::string word;
    double similarity = 0.0;
};

/// The k words most cosine-similar to `word`, excluding itself and zero rows.
/// Ties are broken by row order. Throws InvalidArgument if `word` is unknown.
std::vector<Neighbor> nearest(const WordVectors& vectors, std::string_view word, std::size_t k);

}  // namespace semglove

#endif  // SEMGLOVE_EVAL_HPP
