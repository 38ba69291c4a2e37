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

#ifndef SEMGLOVE_VOCAB_HPP
#define SEMGLOVE_VOCAB_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semglove {

using WordId = std::uint32_t;

/// Marker for tokens that are not in the vocabulary.
inline constexpr WordId kOov = 0xFFFFFFFFu;

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

/// Immutable word <-> id table with corpus frequencies. Ids are assigned in
/// descending frequency order.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Builds from (word, count) pairs already in id order. Throws
    /// InvalidArgument on duplicate or empty words.
    static Vocabulary from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries);

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

    const std::string& word(WordId id) const { return words_.at(id); }
    std::uint64_t count(WordId id) const { return counts_.at(id); }
    std::span<const std::string> words() const noexcept { return words_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    /// Returns kOov when the word is absent.
    WordId id(std::string_view word) const noexcept;
    bool contains(std::string_view word) const noexcept { return id(word) != kOov; }

    std::uint64_t total_count() const noexcept;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.words_ == b.words_ && a.counts_ == b.counts_;
    }

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> ids_;
};

/// One corpus line. OOV tokens keep their slot so window distances are
/// measured over surface positions.
struct Sentence {
    std::vector<std::string> tokens;
    std::vector<WordId> ids;
};

/// Splits on ASCII whitespace. The views point into `line`.
std::vector<std::string_view> split_whitespace(std::string_view line);

Sentence tokenize_sentence(std::string_view line, const Vocabulary& vocab);

/// Like tokenize_sentence but produces ids only, which is all the builders need.
std::vector<WordId> encode_line(std::string_view line, const Vocabulary& vocab);

/// Counts words of a whitespace-tokenized corpus (one sentence per line) and
/// keeps those with frequency >= min_count. Ties in frequency are ordered by
/// first occurrence.
Vocabulary build_vocab(std::istream& corpus, std::uint64_t min_count);

/// Same result as the streaming overload, counting line shards in parallel
/// and merging the per-thread maps.
Vocabulary build_vocab(std::span<const std::string> lines, std::uint64_t min_count, int threads);

Vocabulary build_vocab_file(const std::filesystem::path& corpus, std::uint64_t min_count);

void write_vocab(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocab(std::istream& in);
void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocab(const std::filesystem::path& path);

}  // namespace semglove

#endif  // SEMGLOVE_VOCAB_HPP
