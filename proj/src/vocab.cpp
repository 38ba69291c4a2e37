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

#include "semglove/vocab.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <tuple>

#include "io_util.hpp"
#include "semglove/error.hpp"

namespace semglove {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

struct WordStat {
    std::uint64_t count = 0;
    std::uint64_t first_line = 0;
    std::uint64_t first_pos = 0;
};

using CountMap = std::unordered_map<std::string, WordStat, StringHash, std::equal_to<>>;

void count_line(std::string_view line, std::uint64_t line_no, CountMap& counts) {
    std::uint64_t pos = 0;
    for (std::string_view tok : split_whitespace(line)) {
        auto it = counts.find(tok);
        if (it == counts.end()) {
            counts.emplace(std::string(tok), WordStat{1, line_no, pos});
        } else {
            ++it->second.count;
        }
        ++pos;
    }
}

void merge_counts(CountMap& into, CountMap&& from) {
    for (auto& [word, stat] : from) {
        auto [it, inserted] = into.try_emplace(word, stat);
        if (!inserted) {
            it->second.count += stat.count;
            if (std::tie(stat.first_line, stat.first_pos) <
                std::tie(it->second.first_line, it->second.first_pos)) {
                it->second.first_line = stat.first_line;
                it->second.first_pos = stat.first_pos;
            }
        }
    }
}

Vocabulary finish(CountMap&& counts, std::uint64_t min_count) {
    if (min_count < 1) {
        throw InvalidArgument("min_count must be >= 1");
    }
    std::vector<std::pair<std::string, WordStat>> kept;
    for (auto& [word, stat] : counts) {
        if (stat.count >= min_count) {
            kept.emplace_back(word, stat);
        }
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second.count != b.second.count) {
            return a.second.count > b.second.count;
        }
        return std::tie(a.second.first_line, a.second.first_pos) <
               std::tie(b.second.first_line, b.second.first_pos);
    });
    std::vector<std::pair<std::string, std::uint64_t>> entries;
    entries.reserve(kept.size());
    for (auto& [word, stat] : kept) {
        entries.emplace_back(std::move(word), stat.count);
    }
    return Vocabulary::from_entries(std::move(entries));
}

}  // namespace

Vocabulary Vocabulary::from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries) {
    Vocabulary v;
    v.words_.reserve(entries.size());
    v.counts_.reserve(entries.size());
    v.ids_.reserve(entries.size());
    for (auto& [word, count] : entries) {
        if (word.empty()) {
            throw InvalidArgument("empty word in vocabulary");
        }
        const auto id = static_cast<WordId>(v.words_.size());
        if (!v.ids_.emplace(word, id).second) {
            throw InvalidArgument("duplicate word in vocabulary: " + word);
        }
        v.words_.push_back(std::move(word));
        v.counts_.push_back(count);
    }
    return v;
}

WordId Vocabulary::id(std::string_view word) const noexcept {
    auto it = ids_.find(word);
    return it == ids_.end() ? kOov : it->second;
}

std::uint64_t Vocabulary::total_count() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

Sentence tokenize_sentence(std::string_view line, const Vocabulary& vocab) {
    Sentence s;
    for (std::string_view tok : split_whitespace(line)) {
        s.tokens.emplace_back(tok);
        s.ids.push_back(vocab.id(tok));
    }
    return s;
}

std::vector<WordId> encode_line(std::string_view line, const Vocabulary& vocab) {
    std::vector<WordId> ids;
    for (std::string_view tok : split_whitespace(line)) {
        ids.push_back(vocab.id(tok));
    }
    return ids;
}

Vocabulary build_vocab(std::istream& corpus, std::uint64_t min_count) {
    CountMap counts;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(corpus, line)) {
        count_line(line, line_no++, counts);
    }
    if (corpus.bad()) {
        throw IoError("error while reading corpus");
    }
    return finish(std::move(counts), min_count);
}

Vocabulary build_vocab(std::span<const std::string> lines, std::uint64_t min_count, int threads) {
    const int shards = std::max(1, threads);
    std::vector<CountMap> partial(static_cast<std::size_t>(shards));
    const std::size_t n = lines.size();

#pragma omp parallel for num_threads(shards) schedule(static, 1)
    for (int s = 0; s < shards; ++s) {
        const std::size_t begin = n * static_cast<std::size_t>(s) / static_cast<std::size_t>(shards);
        const std::size_t end =
            n * static_cast<std::size_t>(s + 1) / static_cast<std::size_t>(shards);
        for (std::size_t i = begin; i < end; ++i) {
            count_line(lines[i], i, partial[static_cast<std::size_t>(s)]);
        }
    }

    CountMap merged = std::move(partial[0]);
    for (std::size_t s = 1; s < partial.size(); ++s) {
        merge_counts(merged, std::move(partial[s]));
    }
    return finish(std::move(merged), min_count);
}

Vocabulary build_vocab_file(const std::filesystem::path& corpus, std::uint64_t min_count) {
    auto in = detail::open_in(corpus);
    return build_vocab(in, min_count);
}

void write_vocab(std::ostream& out, const Vocabulary& vocab) {
    std::string buf;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        buf.clear();
        buf += vocab.word(static_cast<WordId>(i));
        buf += ' ';
        buf += std::to_string(vocab.count(static_cast<WordId>(i)));
        buf += '\n';
        out << buf;
    }
}

Vocabulary read_vocab(std::istream& in) {
    std::vector<std::pair<std::string, std::uint64_t>> entries;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> seen;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::strip_cr(raw);
        const auto fields = split_whitespace(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 2) {
            throw ParseError(line_no, "expected 'word count', got " +
                                          std::to_string(fields.size()) + " fields");
        }
        std::uint64_t count = 0;
        if (!detail::parse_number(fields[1], count)) {
            throw ParseError(line_no, "count is not a non-negative integer: '" +
                                          std::string(fields[1]) + "'");
        }
        if (auto [it, fresh] = seen.emplace(std::string(fields[0]), line_no); !fresh) {
            throw ParseError(line_no, "duplicate word '" + it->first + "' (first seen on line " +
                                          std::to_string(it->second) + ")");
        }
        entries.emplace_back(std::string(fields[0]), count);
    }
    if (in.bad()) {
        throw IoError("error while reading vocabulary");
    }
    return Vocabulary::from_entries(std::move(entries));
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
    auto out = detail::open_out(path);
    write_vocab(out, vocab);
    out.flush();
    detail::check_written(out, path);
}

Vocabulary load_vocab(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_vocab(in);
}

}  // namespace semglove
