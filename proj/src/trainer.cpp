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

#include "semglove/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <string>

#include "semglove/error.hpp"

namespace semglove {

namespace {

// Memory policies for the update kernel. The hogwild kernel goes through
// relaxed atomic_ref so concurrent scalar updates are well-defined races.
struct PlainAccess {
    static double load(const double& v) { return v; }
    static void store(double& v, double x) { v = x; }
};

struct RelaxedAccess {
    static double load(const double& v) {
        return std::atomic_ref<double>(const_cast<double&>(v)).load(std::memory_order_relaxed);
    }
    static void store(double& v, double x) {
        std::atomic_ref<double>(v).store(x, std::memory_order_relaxed);
    }
};

double clip(double g, double limit) {
    if (limit <= 0.0) {
        return g;
    }
    return std::clamp(g, -limit, limit);
}

template <typename Access>
double step_impl(EmbeddingSet& emb, const CoocRecord& rec, const TrainConfig& cfg,
                 std::uint64_t index) {
    const std::size_t dim = emb.dim;
    double* e = emb.target.data() + rec.i * dim;
    double* c = emb.context.data() + rec.j * dim;
    double* ge = emb.gsq_target.data() + rec.i * dim;
    double* gc = emb.gsq_context.data() + rec.j * dim;

    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        dot += Access::load(e[d]) * Access::load(c[d]);
    }
    const double residual = dot + Access::load(emb.target_bias[rec.i]) +
                            Access::load(emb.context_bias[rec.j]) - std::log(rec.x);
    const double f = weight_f(rec.x, cfg.x_max, cfg.alpha);
    const double loss = f * residual * residual;
    const double g = 2.0 * f * residual;

    double check = g;
    for (std::size_t d = 0; d < dim; ++d) {
        const double ed = Access::load(e[d]);
        const double cd = Access::load(c[d]);
        const double grad_e = clip(g * cd, cfg.grad_clip);
        const double grad_c = clip(g * ed, cfg.grad_clip);
        const double ge_new = Access::load(ge[d]) + grad_e * grad_e;
        const double gc_new = Access::load(gc[d]) + grad_c * grad_c;
        Access::store(ge[d], ge_new);
        Access::store(gc[d], gc_new);
        const double e_new = ed - cfg.lr * grad_e / std::sqrt(ge_new);
        const double c_new = cd - cfg.lr * grad_c / std::sqrt(gc_new);
        Access::store(e[d], e_new);
        Access::store(c[d], c_new);
        check += e_new + c_new;
    }

    const double grad_b = clip(g, cfg.grad_clip);
    const double gbt = Access::load(emb.gsq_target_bias[rec.i]) + grad_b * grad_b;
    const double gbc = Access::load(emb.gsq_context_bias[rec.j]) + grad_b * grad_b;
    Access::store(emb.gsq_target_bias[rec.i], gbt);
    Access::store(emb.gsq_context_bias[rec.j], gbc);
    const double bt = Access::load(emb.target_bias[rec.i]) - cfg.lr * grad_b / std::sqrt(gbt);
    const double bc = Access::load(emb.context_bias[rec.j]) - cfg.lr * grad_b / std::sqrt(gbc);
    Access::store(emb.target_bias[rec.i], bt);
    Access::store(emb.context_bias[rec.j], bc);
    check += bt + bc;

    if (!std::isfinite(check) || !std::isfinite(loss)) {
        throw NumericError("non-finite parameter after record " + std::to_string(index) + " (" +
                           std::to_string(rec.i) + ", " + std::to_string(rec.j) +
                           ", x=" + std::to_string(rec.x) + ")");
    }
    return loss;
}

void check_records(std::span<const CoocRecord> records, std::size_t vocab_size) {
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (r.i >= vocab_size || r.j >= vocab_size) {
            throw RecordError(k, "word id out of range for vocabulary of " +
                                     std::to_string(vocab_size));
        }
        if (!(r.x > 0.0) || !std::isfinite(r.x)) {
            throw RecordError(k, "co-occurrence value must be finite and > 0");
        }
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (dim < 1) {
        throw InvalidArgument("dim must be >= 1");
    }
    if (!(x_max > 0.0)) {
        throw InvalidArgument("x_max must be > 0");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("alpha must be in (0, 1]");
    }
    if (!(lr > 0.0)) {
        throw InvalidArgument("lr must be > 0");
    }
    if (iterations < 0) {
        throw InvalidArgument("iterations must be >= 0");
    }
}

double weight_f(double x, double x_max, double alpha) {
    if (!(x > 0.0)) {
        throw InvalidArgument("weighting function needs x > 0");
    }
    return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

PairGradient loss_and_grad(std::span<const double> target, std::span<const double> context,
                           double target_bias, double context_bias, double x,
                           const TrainConfig& cfg) {
    if (target.size() != context.size()) {
        throw InvalidArgument("target and context vectors differ in dimension");
    }
    double dot = 0.0;
    for (std::size_t d = 0; d < target.size(); ++d) {
        dot += target[d] * context[d];
    }
    PairGradient out;
    const double f = weight_f(x, cfg.x_max, cfg.alpha);
    out.residual = dot + target_bias + context_bias - std::log(x);
    out.loss = f * out.residual * out.residual;
    const double g = 2.0 * f * out.residual;
    out.d_target.resize(target.size());
    out.d_context.resize(target.size());
    for (std::size_t d = 0; d < target.size(); ++d) {
        out.d_target[d] = g * context[d];
        out.d_context[d] = g * target[d];
    }
    out.d_bias = g;
    return out;
}

EmbeddingSet EmbeddingSet::initialize(std::size_t vocab_size, std::size_t dim, std::uint64_t seed) {
    EmbeddingSet emb;
    emb.vocab_size = vocab_size;
    emb.dim = dim;
    const std::size_t n = vocab_size * dim;
    std::mt19937_64 rng(seed);
    const double half = 0.5 / static_cast<double>(dim);
    std::uniform_real_distribution<double> uniform(-half, half);
    emb.target.resize(n);
    emb.context.resize(n);
    for (auto& v : emb.target) {
        v = uniform(rng);
    }
    for (auto& v : emb.context) {
        v = uniform(rng);
    }
    emb.target_bias.assign(vocab_size, 0.0);
    emb.context_bias.assign(vocab_size, 0.0);
    emb.gsq_target.assign(n, 1.0);
    emb.gsq_context.assign(n, 1.0);
    emb.gsq_target_bias.assign(vocab_size, 1.0);
    emb.gsq_context_bias.assign(vocab_size, 1.0);
    return emb;
}

bool EmbeddingSet::all_finite() const {
    const auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return finite(target) && finite(context) && finite(target_bias) && finite(context_bias);
}

double adagrad_step(EmbeddingSet& emb, const CoocRecord& rec, const TrainConfig& cfg) {
    return step_impl<PlainAccess>(emb, rec, cfg, 0);
}

double train_epoch_serial(EmbeddingSet& emb, std::span<const CoocRecord> records,
                          const TrainConfig& cfg) {
    if (records.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        total += step_impl<PlainAccess>(emb, records[k], cfg, k);
    }
    return total / static_cast<double>(records.size());
}

double train_epoch(EmbeddingSet& emb, std::span<const CoocRecord> records, const TrainConfig& cfg) {
    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || records.size() < static_cast<std::size_t>(threads)) {
        return train_epoch_serial(emb, records, cfg);
    }
    const std::size_t n = records.size();
    std::vector<double> partial(static_cast<std::size_t>(threads), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::atomic<bool> failed{false};

#pragma omp parallel for num_threads(threads) schedule(static, 1)
    for (int t = 0; t < threads; ++t) {
        const auto ut = static_cast<std::size_t>(t);
        const std::size_t begin = n * ut / static_cast<std::size_t>(threads);
        const std::size_t end = n * (ut + 1) / static_cast<std::size_t>(threads);
        try {
            double local = 0.0;
            for (std::size_t k = begin; k < end && !failed.load(std::memory_order_relaxed); ++k) {
                local += step_impl<RelaxedAccess>(emb, records[k], cfg, k);
            }
            partial[ut] = local;
        } catch (...) {
            errors[ut] = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    double total = 0.0;
    for (double p : partial) {
        total += p;
    }
    return total / static_cast<double>(n);
}

TrainResult train(std::span<const CoocRecord> records, std::size_t vocab_size,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
    cfg.validate();
    check_records(records, vocab_size);
    TrainResult result{EmbeddingSet::initialize(vocab_size, static_cast<std::size_t>(cfg.dim), cfg.seed),
                       {}};
    result.epoch_loss.reserve(static_cast<std::size_t>(cfg.iterations));
    for (int epoch = 0; epoch < cfg.iterations; ++epoch) {
        const double loss = train_epoch(result.embeddings, records, cfg);
        result.epoch_loss.push_back(loss);
        if (on_epoch) {
            on_epoch(epoch + 1, loss);
        }
    }
    return result;
}

TrainResult train(const std::filesystem::path& cooc_path, std::size_t vocab_size,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
    const auto records = load_records(cooc_path);
    return train(records, vocab_size, cfg, on_epoch);
}

WordVectors finalize(const EmbeddingSet& emb, std::span<const std::string> words) {
    if (words.size() != emb.vocab_size) {
        throw InvalidArgument("finalize needs one word per embedding row");
    }
    WordVectors out(emb.dim);
    std::vector<double> row(emb.dim);
    for (std::size_t i = 0; i < emb.vocab_size; ++i) {
        const auto e = emb.target_row(i);
        const auto c = emb.context_row(i);
        for (std::size_t d = 0; d < emb.dim; ++d) {
            row[d] = e[d] + c[d];
        }
        out.add(words[i], row);
    }
    return out;
}

}  // namespace semglove
