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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>

#include "io_util.hpp"

namespace semglove {

namespace {

double norm(std::span<const double> u) {
    double s = 0.0;
    for (double x : u) {
        s += x * x;
    }
    return std::sqrt(s);
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return out;
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw InvalidArgument("cosine of vectors with different dimensions");
    }
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) {
        throw InvalidArgument("cosine similarity is undefined for a zero vector");
    }
    double dot = 0.0;
    for (std::size_t d = 0; d < u.size(); ++d) {
        dot += u[d] * v[d];
    }
    return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k + 1;
        while (end < order.size() && xs[order[end]] == xs[order[k]]) {
            ++end;
        }
        // positions k..end-1 hold ranks k+1..end
        const double rank = 0.5 * static_cast<double>(k + 1 + end);
        for (std::size_t t = k; t < end; ++t) {
            ranks[order[t]] = rank;
        }
        k = end;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InvalidArgument("spearman needs sequences of equal length");
    }
    if (xs.size() < 2) {
        throw InvalidArgument("spearman needs at least 2 values");
    }
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) {
            throw InvalidArgument("spearman input contains a non-finite value");
        }
    }
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    const double mean = 0.5 * static_cast<double>(xs.size() + 1);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < rx.size(); ++k) {
        const double dx = rx[k] - mean;
        const double dy = ry[k] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw InvalidArgument("spearman is undefined for a constant sequence");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SimilarityDataset read_dataset(std::istream& in, std::string name) {
    SimilarityDataset ds{std::move(name), {}};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::strip_cr(raw);
        const auto fields = split_whitespace(line);
        if (fields.empty() || fields[0].front() == '#') {
            continue;
        }
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 'word1 word2 score', got " +
                                          std::to_string(fields.size()) + " fields");
        }
        double score = 0.0;
        if (!detail::parse_number(fields[2], score) || !std::isfinite(score)) {
            throw ParseError(line_no, "bad score '" + std::string(fields[2]) + "'");
        }
        ds.pairs.push_back({lowercase(fields[0]), lowercase(fields[1]), score});
    }
    if (in.bad()) {
        throw IoError("error while reading dataset");
    }
    if (ds.pairs.empty()) {
        throw FormatError("dataset '" + ds.name + "' has no pairs");
    }
    return ds;
}

SimilarityDataset load_dataset(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_dataset(in, path.stem().string());
}

EvalReport evaluate(const WordVectors& vectors, const SimilarityDataset& dataset) {
    EvalReport report{dataset.name, 0.0, 0, dataset.pairs.size()};
    std::vector<double> human;
    std::vector<double> model;
    for (const auto& p : dataset.pairs) {
        const auto a = vectors.find(p.first);
        const auto b = vectors.find(p.second);
        if (a < 0 || b < 0) {
            continue;
        }
        human.push_back(p.score);
        model.push_back(cosine(vectors.row(static_cast<std::size_t>(a)),
                               vectors.row(static_cast<std::size_t>(b))));
    }
    report.covered = human.size();
    if (report.covered < 2) {
        throw InsufficientCoverage(report.covered, report.total);
    }
    report.spearman = spearman(human, model);
    return report;
}

std::string format_report(const EvalReport& report) {
    std::string out = report.name + ' ';
    detail::append_double(out, report.spearman);
    out += ' ' + std::to_string(report.covered) + '/' + std::to_string(report.total);
    return out;
}

std::vector<Neighbor> nearest(const WordVectors& vectors, std::string_view word, std::size_t k) {
    const auto q = vectors.find(word);
    if (q < 0) {
        throw InvalidArgument("word '" + std::string(word) + "' is not in the vectors");
    }
    const auto query = vectors.row(static_cast<std::size_t>(q));
    if (norm(query) == 0.0) {
        throw InvalidArgument("word '" + std::string(word) + "' has a zero vector");
    }
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(vectors.size());
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (static_cast<std::ptrdiff_t>(r) == q || norm(vectors.row(r)) == 0.0) {
            continue;
        }
        scored.emplace_back(cosine(query, vectors.row(r)), r);
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
    std::vector<Neighbor> out;
    out.reserve(take);
    for (std::size_t t = 0; t < take; ++t) {
        out.push_back({vectors.word(scored[t].second), scored[t].first});
    }
    return out;
}

}  // namespace semglove
