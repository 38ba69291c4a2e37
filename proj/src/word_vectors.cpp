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

#include "semglove/word_vectors.hpp"

#include <istream>
#include <ostream>

#include "io_util.hpp"
#include "semglove/error.hpp"

namespace semglove {

void WordVectors::add(std::string word, std::span<const double> values) {
    if (values.size() != dim_) {
        throw InvalidArgument("vector for '" + word + "' has " + std::to_string(values.size()) +
                              " values, expected " + std::to_string(dim_));
    }
    if (!index_.emplace(word, words_.size()).second) {
        throw InvalidArgument("duplicate word '" + word + "'");
    }
    words_.push_back(std::move(word));
    data_.insert(data_.end(), values.begin(), values.end());
}

std::ptrdiff_t WordVectors::find(std::string_view word) const {
    auto it = index_.find(word);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

void write_vectors(std::ostream& out, const WordVectors& vectors) {
    std::string line;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        line = vectors.word(k);
        for (double v : vectors.row(k)) {
            line += ' ';
            detail::append_double(line, v);
        }
        line += '\n';
        out << line;
    }
}

WordVectors read_vectors(std::istream& in) {
    WordVectors vectors;
    bool have_dim = false;
    std::vector<double> values;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto fields = split_whitespace(detail::strip_cr(raw));
        if (fields.empty()) {
            continue;
        }
        if (fields.size() < 2) {
            throw ParseError(line_no, "vector line has no values");
        }
        const std::size_t dim = fields.size() - 1;
        if (!have_dim) {
            vectors = WordVectors(dim);
            have_dim = true;
        } else if (dim != vectors.dim()) {
            throw ParseError(line_no, "ragged line: " + std::to_string(dim) + " values, expected " +
                                          std::to_string(vectors.dim()));
        }
        values.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            if (!detail::parse_number(fields[d + 1], values[d])) {
                throw ParseError(line_no, "bad number '" + std::string(fields[d + 1]) + "'");
            }
        }
        try {
            vectors.add(std::string(fields[0]), values);
        } catch (const InvalidArgument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (in.bad()) {
        throw IoError("error while reading vectors");
    }
    return vectors;
}

void save_vectors(const WordVectors& vectors, const std::filesystem::path& path) {
    auto out = detail::open_out(path);
    write_vectors(out, vectors);
    out.flush();
    detail::check_written(out, path);
}

WordVectors load_vectors(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_vectors(in);
}

}  // namespace semglove
