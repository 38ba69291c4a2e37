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

#include "oracles.hpp"

#include <cmath>
#include <cstdlib>

namespace semglove::testing {

PairMap window_oracle(std::span<const std::vector<WordId>> sentences, int window, bool symmetric) {
    PairMap out;
    for (const auto& s : sentences) {
        const auto n = static_cast<long>(s.size());
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b) {
                const long d = b - a;
                if (d <= 0 || d > window || s[a] == kOov || s[b] == kOov || s[a] == s[b]) {
                    continue;
                }
                if (symmetric) {
                    out[{s[a], s[b]}] += 1.0 / static_cast<double>(d);
                }
                // the later word is the target of a left context
                out[{s[b], s[a]}] += 1.0 / static_cast<double>(d);
            }
        }
    }
    return out;
}

std::vector<std::vector<double>> word_attention_oracle(const SanRecord& rec) {
    const std::size_t words = rec.subword_counts.size();
    const std::size_t l = rec.bpe_ids.size();
    std::vector<std::size_t> owner;
    for (std::size_t w = 0; w < words; ++w) {
        for (std::uint32_t p = 0; p < rec.subword_counts[w]; ++p) {
            owner.push_back(w);
        }
    }
    std::vector<std::vector<double>> out(words, std::vector<double>(words, 0.0));
    for (std::size_t i = 0; i < words; ++i) {
        for (std::size_t j = 0; j < words; ++j) {
            double sum = 0.0;
            double m = 0.0;
            double n = 0.0;
            for (std::size_t k = 0; k < l; ++k) {
                m += owner[k] == i ? 1.0 : 0.0;
                n += owner[k] == j ? 1.0 : 0.0;
                for (std::size_t c = 0; c < l; ++c) {
                    if (owner[k] == i && owner[c] == j) {
                        sum += rec.attn[k * l + c];
                    }
                }
            }
            out[i][j] = sum / m / n;
        }
    }
    return out;
}

std::vector<std::vector<double>> word_cooc_oracle(const PairMap& bpe,
                                                  const std::vector<std::vector<TokenId>>& pieces) {
    const std::size_t v = pieces.size();
    std::vector<std::vector<double>> out(v, std::vector<double>(v, 0.0));
    for (std::size_t i = 0; i < v; ++i) {
        for (std::size_t j = 0; j < v; ++j) {
            if (i == j) {
                continue;
            }
            double sum = 0.0;
            for (TokenId s : pieces[i]) {
                for (TokenId t : pieces[j]) {
                    auto it = bpe.find({s, t});
                    sum += it == bpe.end() ? 0.0 : it->second;
                }
            }
            out[i][j] = sum / static_cast<double>(pieces[i].size()) /
                        static_cast<double>(pieces[j].size());
        }
    }
    return out;
}

double loss_oracle(std::span<const double> e, std::span<const double> c, double b, double bc,
                   double x, double x_max, double alpha) {
    double dot = 0.0;
    for (std::size_t d = 0; d < e.size(); ++d) {
        dot += e[d] * c[d];
    }
    const double f = x >= x_max ? 1.0 : std::pow(x / x_max, alpha);
    const double r = dot + b + bc - std::log(x);
    return f * r * r;
}

FiniteDiff finite_difference(std::span<const double> e, std::span<const double> c, double b,
                             double bc, double x, double x_max, double alpha, double h) {
    std::vector<double> ev(e.begin(), e.end());
    std::vector<double> cv(c.begin(), c.end());
    const auto loss = [&](double bb, double bbc) {
        return loss_oracle(ev, cv, bb, bbc, x, x_max, alpha);
    };
    FiniteDiff out;
    for (auto* vec : {&ev, &cv}) {
        auto& grad = vec == &ev ? out.d_target : out.d_context;
        for (std::size_t d = 0; d < vec->size(); ++d) {
            const double keep = (*vec)[d];
            (*vec)[d] = keep + h;
            const double up = loss(b, bc);
            (*vec)[d] = keep - h;
            const double down = loss(b, bc);
            (*vec)[d] = keep;
            grad.push_back((up - down) / (2.0 * h));
        }
    }
    out.d_target_bias = (loss(b + h, bc) - loss(b - h, bc)) / (2.0 * h);
    out.d_context_bias = (loss(b, bc + h) - loss(b, bc - h)) / (2.0 * h);
    return out;
}

PairMap to_map(const CoocMatrix& m) {
    PairMap out;
    for (const auto& r : m.entries()) {
        out[{r.i, r.j}] = r.x;
    }
    return out;
}

}  // namespace semglove::testing
