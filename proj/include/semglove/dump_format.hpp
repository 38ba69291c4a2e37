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

// SGDV score dumps produced by the transformer extractor, and the subword
// lexicon that maps vocabulary words to subword token ids. Byte layouts are
// documented in docs/FORMATS.md.

#ifndef SEMGLOVE_DUMP_FORMAT_HPP
#define SEMGLOVE_DUMP_FORMAT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semglove/vocab.hpp"

namespace semglove {

using TokenId = std::uint32_t;

enum class DumpMode : std::uint8_t { kSan = 1, kMlm = 2 };

const char* to_string(DumpMode mode) noexcept;

inline constexpr char kDumpMagic[4] = {'S', 'G', 'D', 'V'};
inline constexpr std::uint32_t kDumpVersion = 1;
inline constexpr std::size_t kDumpHeaderBytes = 21;

struct DumpHeader {
    DumpMode mode = DumpMode::kSan;
    std::uint32_t top_k = 0;     // 0 for SAN, K for MLM
    std::uint32_t n_layers = 1;
    std::uint32_t n_heads = 1;

    /// Throws FormatError on any header invariant violation.
    void validate() const;

    friend bool operator==(const DumpHeader&, const DumpHeader&) = default;
};

/// One sentence of summed attention. attn is L x L row-major;
/// attn[k * L + l] is the attention from subword k to subword l.
struct SanRecord {
    std::vector<std::uint32_t> subword_counts;  // one per word, sums to L
    std::vector<TokenId> bpe_ids;               // L
    std::vector<double> attn;                   // L * L, stored as f32

    std::size_t num_tokens() const noexcept { return bpe_ids.size(); }
    std::size_t num_words() const noexcept { return subword_counts.size(); }
    double at(std::size_t k, std::size_t l) const { return attn[k * bpe_ids.size() + l]; }

    friend bool operator==(const SanRecord&, const SanRecord&) = default;
};

struct Prediction {
    TokenId token = 0;
    double logit = 0.0;  // raw pre-softmax, stored as f32

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// One sentence of masked-LM predictions: top_k per subword position, best
/// first. predictions[i * top_k + r] is rank r at position i.
struct MlmRecord {
    std::vector<std::uint32_t> subword_counts;
    std::vector<TokenId> bpe_ids;
    std::vector<Prediction> predictions;

    std::size_t num_tokens() const noexcept { return bpe_ids.size(); }
    std::size_t num_words() const noexcept { return subword_counts.size(); }

    friend bool operator==(const MlmRecord&, const MlmRecord&) = default;
};

/// Start offset of every word in the subword sequence, plus a final L.
std::vector<std::size_t> word_offsets(std::span<const std::uint32_t> subword_counts);

/// Hard invariants; throw InvalidArgument with a description.
void check_record(const SanRecord& rec);
void check_record(const MlmRecord& rec, std::uint32_t top_k);

/// Number of attention rows whose sum deviates from expected_row_sum by more
/// than rel_tol relative.
std::size_t count_row_sum_violations(const SanRecord& rec, double expected_row_sum,
                                     double rel_tol = 1e-2);

/// Sequential reader. Records are decoded lazily; each record is validated
/// before it is returned.
class DumpReader {
public:
    explicit DumpReader(const std::filesystem::path& path);
    /// Reads from a caller-owned stream positioned at the header.
    explicit DumpReader(std::istream& in);

    const DumpHeader& header() const noexcept { return header_; }

    /// Next record, or nullopt at end of stream. Throws ConfigError when the
    /// dump is in the other mode, FormatError on truncation, RecordError on
    /// an invariant violation.
    std::optional<SanRecord> next_san();
    std::optional<MlmRecord> next_mlm();

    /// Index of the next record to be read.
    std::uint64_t records_read() const noexcept { return index_; }

private:
    void read_header();
    bool read_prefix(std::vector<std::uint32_t>& subword_counts, std::vector<TokenId>& bpe_ids);

    std::unique_ptr<std::ifstream> owned_;
    std::istream* in_;
    DumpHeader header_;
    std::uint64_t index_ = 0;
    std::vector<char> scratch_;
};

/// Sequential writer. Records are checked before any byte is written.
class DumpWriter {
public:
    DumpWriter(const std::filesystem::path& path, const DumpHeader& header);
    DumpWriter(std::ostream& out, const DumpHeader& header);

    void write(const SanRecord& rec);
    void write(const MlmRecord& rec);
    void close();

private:
    void write_header();

    std::unique_ptr<std::ofstream> owned_;
    std::ostream* out_;
    DumpHeader header_;
    std::filesystem::path path_;
    std::vector<char> scratch_;
};

void write_dump(const std::filesystem::path& path, const DumpHeader& header,
                std::span<const SanRecord> records);
void write_dump(const std::filesystem::path& path, const DumpHeader& header,
                std::span<const MlmRecord> records);
std::vector<SanRecord> read_san_dump(const std::filesystem::path& path, DumpHeader* header = nullptr);
std::vector<MlmRecord> read_mlm_dump(const std::filesystem::path& path, DumpHeader* header = nullptr);

struct DumpValidation {
    DumpHeader header;
    std::uint64_t records = 0;
    std::uint64_t flagged_rows = 0;     // SAN rows off N*M by > 1e-2 relative
    std::uint64_t flagged_records = 0;  // records with at least one flagged row
};

/// Reads a whole dump. Hard errors propagate as exceptions; soft row-sum
/// deviations are counted.
DumpValidation validate_dump(const std::filesystem::path& path, double row_sum_rel_tol = 1e-2);

/// word -> subword token ids, kept in insertion order.
class SubwordLexicon {
public:
    /// Throws InvalidArgument on a duplicate word or an empty id list.
    void add(std::string word, std::vector<TokenId> ids);

    std::size_t size() const noexcept { return words_.size(); }
    const std::string& word(std::size_t k) const { return words_.at(k); }
    std::span<const TokenId> ids(std::size_t k) const { return pieces_.at(k); }

    /// nullptr when the word is absent.
    const std::vector<TokenId>* find(std::string_view word) const;

    friend bool operator==(const SubwordLexicon& a, const SubwordLexicon& b) {
        return a.words_ == b.words_ && a.pieces_ == b.pieces_;
    }

private:
    std::vector<std::string> words_;
    std::vector<std::vector<TokenId>> pieces_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

void write_lexicon(std::ostream& out, const SubwordLexicon& lex);
SubwordLexicon read_lexicon(std::istream& in);
void save_lexicon(const SubwordLexicon& lex, const std::filesystem::path& path);
SubwordLexicon load_lexicon(const std::filesystem::path& path);

}  // namespace semglove

#endif  // SEMGLOVE_DUMP_FORMAT_HPP
