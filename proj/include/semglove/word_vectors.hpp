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

#ifndef SEMGLOVE_WORD_VECTORS_HPP
#define SEMGLOVE_WORD_VECTORS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semglove/vocab.hpp"

namespace semglove {

/// Word -> dense vector table, rows in insertion order.
class WordVectors {
public:
    WordVectors() = default;
    explicit WordVectors(std::size_t dim) : dim_(dim) {}

    /// Throws InvalidArgument on a duplicate word or a size mismatch.
    void add(std::string word, std::span<const double> values);

    std::size_t size() const noexcept { return words_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::string& word(std::size_t k) const { return words_.at(k); }
    std::span<const double> row(std::size_t k) const { return {data_.data() + k * dim_, dim_}; }
    std::span<double> row(std::size_t k) { return {data_.data() + k * dim_, dim_}; }

    /// Row index or -1.
    std::ptrdiff_t find(std::string_view word) const;

    friend bool operator==(const WordVectors& a, const WordVectors& b) {
        return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

/// "word v1 ... vd" per line, shortest round-trip decimals.
void write_vectors(std::ostream& out, const WordVectors& vectors);
/// Rejects lines whose column count differs from the first line's.
WordVectors read_vectors(std::istream& in);
void save_vectors(const WordVectors& vectors, const std::filesystem::path& path);
WordVectors load_vectors(const std::filesystem::path& path);

}  // namespace semglove

#endif  // SEMGLOVE_WORD_VECTORS_HPP
