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

// Weighted least-squares factorization of a co-occurrence matrix:
//
//   J = sum over stored (i, j) of f(X_ij) * (e_i . c_j + b_i + b'_j - ln X_ij)^2
//   f(x) = (x / x_max)^alpha for x < x_max, 1 otherwise
//
// optimized with per-parameter AdaGrad, one step per record per epoch.

#ifndef SEMGLOVE_TRAINER_HPP
#define SEMGLOVE_TRAINER_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "semglove/cooc_matrix.hpp"
#include "semglove/word_vectors.hpp"

namespace semglove {

struct TrainConfig {
    int dim = 300;
    double x_max = 10.0;
    double alpha = 0.75;
    double lr = 0.05;
    int iterations = 100;
    int threads = 1;
    std::uint64_t seed = 1;
    double grad_clip = 100.0;  // per-scalar clamp; <= 0 disables

    void validate() const;
};

/// Throws InvalidArgument for x <= 0.
double weight_f(double x, double x_max, double alpha);

/// Per-record loss term and its exact gradients.
struct PairGradient {
    double loss = 0.0;
    double residual = 0.0;          // e.c + b + b' - ln x
    std::vector<double> d_target;   // d loss / d e_i  = 2 f r c_j
    std::vector<double> d_context;  // d loss / d c_j  = 2 f r e_i
    double d_bias = 0.0;            // d loss / d b_i = d loss / d b'_j = 2 f r
};

PairGradient loss_and_grad(std::span<const double> target, std::span<const double> context,
                           double target_bias, double context_bias, double x,
                           const TrainConfig& cfg);

/// Parameters plus AdaGrad accumulators, all V x dim row-major.
struct EmbeddingSet {
    std::size_t vocab_size = 0;
    std::size_t dim = 0;
    std::vector<double> target;
    std::vector<double> context;
    std::vector<double> target_bias;
    std::vector<double> context_bias;
    std::vector<double> gsq_target;
    std::vector<double> gsq_context;
    std::vector<double> gsq_target_bias;
    std::vector<double> gsq_context_bias;

    /// Vectors uniform in (-0.5/dim, 0.5/dim), biases zero, accumulators 1.
    static EmbeddingSet initialize(std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

    std::span<double> target_row(std::size_t i) { return {target.data() + i * dim, dim}; }
    std::span<double> context_row(std::size_t j) { return {context.data() + j * dim, dim}; }
    std::span<const double> target_row(std::size_t i) const { return {target.data() + i * dim, dim}; }
    std::span<const double> context_row(std::size_t j) const { return {context.data() + j * dim, dim}; }

    bool all_finite() const;
};

/// One AdaGrad step on a single record. Returns the loss before the step.
/// Throws NumericError if the step produces a non-finite value.
double adagrad_step(EmbeddingSet& emb, const CoocRecord& rec, const TrainConfig& cfg);

/// Reference epoch: records in order, one thread. Returns the mean loss.
double train_epoch_serial(EmbeddingSet& emb, std::span<const CoocRecord> records,
                          const TrainConfig& cfg);

/// Hogwild epoch: records split into cfg.threads contiguous ranges updated
/// concurrently without locks. Falls back to the serial epoch for one thread.
double train_epoch(EmbeddingSet& emb, std::span<const CoocRecord> records, const TrainConfig& cfg);

struct TrainResult {
    EmbeddingSet embeddings;
    std::vector<double> epoch_loss;  // mean loss per epoch
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

TrainResult train(std::span<const CoocRecord> records, std::size_t vocab_size,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

TrainResult train(const std::filesystem::path& cooc_path, std::size_t vocab_size,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Word i's output vector is target_i + context_i.
WordVectors finalize(const EmbeddingSet& emb, std::span<const std::string> words);

}  // namespace semglove

#endif  // SEMGLOVE_TRAINER_HPP
