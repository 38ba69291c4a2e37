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

#include "semglove/cooc_san.hpp"

#include <algorithm>
#include <istream>
#include <string>

#include "semglove/error.hpp"
#include "semglove/parallel.hpp"

namespace semglove {

namespace {

constexpr std::size_t kBatchRecords = 4096;

}  // namespace

const char* to_string(Distance d) noexcept {
    return d == Distance::kDivision ? "division" : "rank";
}

Distance parse_distance(std::string_view name) {
    if (name == "division") {
        return Distance::kDivision;
    }
    if (name == "rank") {
        return Distance::kRank;
    }
    throw InvalidArgument("unknown distance '" + std::string(name) + "' (expected division|rank)");
}

void SanConfig::validate() const {
    if (window < 1) {
        throw InvalidArgument("window must be >= 1");
    }
    if (select_top < 1 || select_top > 2 * window) {
        throw InvalidArgument("select_top must be in [1, 2*window], got " +
                              std::to_string(select_top));
    }
}

WordAttention bpe_to_word_attention(const SanRecord& rec, int window,
                                    std::span<const WordId> word_ids) {
    const std::size_t words = rec.num_words();
    const auto offsets = word_offsets(rec.subword_counts);
    const auto skipped = [&](std::size_t w) { return !word_ids.empty() && word_ids[w] == kOov; };

    WordAttention out;
    out.rows.resize(words);
    const auto s = static_cast<std::size_t>(window);
    for (std::size_t i = 0; i < words; ++i) {
        if (skipped(i)) {
            continue;
        }
        const std::size_t lo = i >= s ? i - s : 0;
        const std::size_t hi = std::min(words - 1, i + s);
        auto& row = out.rows[i];
        for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i || skipped(j)) {
                continue;
            }
            double total = 0.0;
            for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
                for (std::size_t l = offsets[j]; l < offsets[j + 1]; ++l) {
                    total += rec.at(k, l);
                }
            }
            const auto m = static_cast<double>(offsets[i + 1] - offsets[i]);
            const auto n = static_cast<double>(offsets[j + 1] - offsets[j]);
            row.push_back({static_cast<std::uint32_t>(j), total / (m * n)});
        }
    }
    return out;
}

WordAttnRow select_and_weight(WordId target, std::vector<Candidate> candidates,
                              const SanConfig& cfg) {
    std::erase_if(candidates, [](const Candidate& c) { return !(c.score > 0.0); });
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        if (a.distance != b.distance) {
            return a.distance < b.distance;
        }
        return a.word < b.word;
    });
    const std::size_t keep = std::min(candidates.size(), static_cast<std::size_t>(cfg.select_top));

    WordAttnRow row;
    row.target = target;
    row.contexts.reserve(keep);
    for (std::size_t t = 0; t < keep; ++t) {
        const double w = cfg.distance == Distance::kDivision
                             ? candidates[t].score / candidates[0].score
                             : 1.0 / static_cast<double>(t + 1);
        row.contexts.push_back({candidates[t].word, w});
    }
    return row;
}

void accumulate_san_record(const SanRecord& rec, std::span<const WordId> word_ids,
                           const SanConfig& cfg, CoocMatrix& out) {
    const std::size_t words = rec.num_words();
    if (word_ids.size() < words) {
        throw InvalidArgument("record has " + std::to_string(words) + " words but only " +
                              std::to_string(word_ids.size()) + " ids were supplied");
    }
    const auto attention = bpe_to_word_attention(rec, cfg.window, word_ids.first(words));

    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < words; ++i) {
        const WordId target = word_ids[i];
        if (target == kOov) {
            continue;
        }
        candidates.clear();
        for (const auto& ps : attention.rows[i]) {
            const WordId context = word_ids[ps.position];
            if (context == target) {
                continue;
            }
            const auto dist = ps.position > i ? ps.position - i : i - ps.position;
            candidates.push_back({context, static_cast<std::uint32_t>(dist), ps.score});
        }
        const auto row = select_and_weight(target, candidates, cfg);
        for (const auto& cw : row.contexts) {
            out.accumulate(target, cw.word, cw.weight);
        }
    }
}

CoocMatrix build_san_cooc_serial(std::span<const SanRecord> records,
                                 std::span<const std::vector<WordId>> word_ids,
                                 std::uint32_t vocab_size, const SanConfig& cfg) {
    cfg.validate();
    if (records.size() != word_ids.size()) {
        throw InvalidArgument("records and word id lists differ in length");
    }
    CoocMatrix m(vocab_size);
    for (std::size_t k = 0; k < records.size(); ++k) {
        accumulate_san_record(records[k], word_ids[k], cfg, m);
    }
    m.compact();
    return m;
}

CoocMatrix build_san_cooc(std::span<const SanRecord> records,
                          std::span<const std::vector<WordId>> word_ids,
                          std::uint32_t vocab_size, const SanConfig& cfg, int threads) {
    if (threads <= 1) {
        return build_san_cooc_serial(records, word_ids, vocab_size, cfg);
    }
    cfg.validate();
    if (records.size() != word_ids.size()) {
        throw InvalidArgument("records and word id lists differ in length");
    }
    return sharded_accumulate(records.size(), vocab_size, threads,
                              [&](std::size_t k, CoocMatrix& shard) {
                                  accumulate_san_record(records[k], word_ids[k], cfg, shard);
                              });
}

CoocMatrix build_san_cooc(DumpReader& dump, std::istream& corpus, const Vocabulary& vocab,
                          const SanConfig& cfg, int threads) {
    cfg.validate();
    if (dump.header().mode != DumpMode::kSan) {
        throw ConfigError(std::string("cooc-san needs a SAN dump, got ") +
                          to_string(dump.header().mode));
    }
    const auto vocab_size = static_cast<std::uint32_t>(vocab.size());
    CoocMatrix total(vocab_size);
    std::vector<SanRecord> records;
    std::vector<std::vector<WordId>> ids;
    std::string line;

    auto flush = [&] {
        if (records.empty()) {
            return;
        }
        if (threads <= 1) {
            for (std::size_t k = 0; k < records.size(); ++k) {
                accumulate_san_record(records[k], ids[k], cfg, total);
            }
        } else {
            total.merge(build_san_cooc(records, ids, vocab_size, cfg, threads));
        }
        records.clear();
        ids.clear();
    };

    while (true) {
        const std::uint64_t index = dump.records_read();
        auto rec = dump.next_san();
        if (!rec) {
            break;
        }
        std::vector<WordId> line_ids;
        while (line_ids.empty()) {
            if (!std::getline(corpus, line)) {
                throw RecordError(index, "corpus ended before the dump");
            }
            line_ids = encode_line(line, vocab);
        }
        if (line_ids.size() < rec->num_words()) {
            throw RecordError(index, "record has " + std::to_string(rec->num_words()) +
                                         " words but its corpus line has " +
                                         std::to_string(line_ids.size()));
        }
        line_ids.resize(rec->num_words());
        records.push_back(std::move(*rec));
        ids.push_back(std::move(line_ids));
        if (records.size() >= kBatchRecords) {
            flush();
        }
    }
    flush();
    total.compact();
    return total;
}

CoocMatrix cooc_intersect(const CoocMatrix& support, const CoocMatrix& values) {
    CoocMatrix out(std::max(support.vocab_size(), values.vocab_size()));
    for (const auto& r : support.entries()) {
        const double x = values.get(r.i, r.j);
        if (x > 0.0) {
            out.accumulate(r.i, r.j, x);
        }
    }
    out.compact();
    return out;
}

}  // namespace semglove
