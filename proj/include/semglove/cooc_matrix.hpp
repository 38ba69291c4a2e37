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

#ifndef SEMGLOVE_COOC_MATRIX_HPP
#define SEMGLOVE_COOC_MATRIX_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace semglove {

/// On-disk triple: i (u32), j (u32), x (f64), little-endian, 16 bytes.
struct CoocRecord {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double x = 0.0;

    friend bool operator==(const CoocRecord&, const CoocRecord&) = default;
};

inline constexpr std::size_t kCoocRecordBytes = 16;

/// Sparse accumulator for directed (target, context) -> weight.
///
/// Additions are buffered and folded into a (i, j)-sorted entry array on
/// compaction. Each entry is summed strictly in the order the additions were
/// made, so a single-threaded build is bit-identical to a naive map.
///
/// Read accessors compact lazily; call compact() before sharing a matrix
/// between threads. A vocab_size of 0 disables the id range check.
class CoocMatrix {
public:
    explicit CoocMatrix(std::uint32_t vocab_size = 0);

    std::uint32_t vocab_size() const noexcept { return vocab_size_; }

    /// Adds w to entry (i, j). Throws InvalidArgument for i == j, w <= 0,
    /// non-finite w, or an id outside [0, vocab_size).
    void accumulate(std::uint32_t i, std::uint32_t j, double w);

    /// Entry-wise sum. Both operands must have the same vocab_size.
    void merge(const CoocMatrix& other);

    void compact() const;

    std::size_t nnz() const;
    bool empty() const { return nnz() == 0; }

    /// Returns 0 for absent entries.
    double get(std::uint32_t i, std::uint32_t j) const;
    bool contains(std::uint32_t i, std::uint32_t j) const;

    /// Entries sorted by (i, j).
    std::span<const CoocRecord> entries() const;

    /// Entries with target i, sorted by j.
    std::span<const CoocRecord> row(std::uint32_t i) const;

    double sum() const;

    void reserve_pending(std::size_t n) { pending_.reserve(n); }

private:
    std::uint32_t vocab_size_;
    mutable std::vector<CoocRecord> entries_;
    mutable std::vector<CoocRecord> pending_;
};

/// True when both matrices hold the same (i, j) support and every value is
/// within `rel_tol` relative difference (0 means bit-equal).
bool approx_equal(const CoocMatrix& a, const CoocMatrix& b, double rel_tol = 0.0);

// cooccur.bin: headerless stream of records.

void write_records(std::ostream& out, std::span<const CoocRecord> records);
std::vector<CoocRecord> read_records(std::istream& in);
void save_records(const std::filesystem::path& path, std::span<const CoocRecord> records);
std::vector<CoocRecord> load_records(const std::filesystem::path& path);

void save_bin(const CoocMatrix& m, const std::filesystem::path& path);

/// Loads a record file into a matrix. When vocab_size is 0 it is inferred as
/// one past the largest id. Records violating the matrix invariants raise
/// RecordError; duplicated (i, j) records are summed.
CoocMatrix load_bin(const std::filesystem::path& path, std::uint32_t vocab_size = 0);

/// Rewrites the record file in a uniformly random order drawn from `seed`.
void shuffle_file(const std::filesystem::path& in, const std::filesystem::path& out,
                  std::uint64_t seed);

void shuffle_records(std::vector<CoocRecord>& records, std::uint64_t seed);

}  // namespace semglove

#endif  // SEMGLOVE_COOC_MATRIX_HPP
