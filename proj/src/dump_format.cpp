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

#include "semglove/dump_format.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

#include "io_util.hpp"
#include "semglove/error.hpp"

namespace semglove {

namespace {

// Far above any encoder's position limit; guards allocation on corrupt input.
constexpr std::uint32_t kMaxTokens = 1u << 13;

std::uint64_t sum_counts(std::span<const std::uint32_t> counts) {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void check_prefix(std::span<const std::uint32_t> subword_counts, std::size_t num_tokens) {
    for (std::size_t w = 0; w < subword_counts.size(); ++w) {
        if (subword_counts[w] == 0) {
            throw InvalidArgument("word " + std::to_string(w) + " has zero subwords");
        }
    }
    const auto total = sum_counts(subword_counts);
    if (total != num_tokens) {
        throw InvalidArgument("subword_counts sum to " + std::to_string(total) + " but L = " +
                              std::to_string(num_tokens));
    }
}

void append_u32(std::vector<char>& buf, std::uint32_t v) {
    const auto at = buf.size();
    buf.resize(at + 4);
    detail::put_u32(buf.data() + at, v);
}

void append_f32(std::vector<char>& buf, float v) {
    const auto at = buf.size();
    buf.resize(at + 4);
    detail::put_f32(buf.data() + at, v);
}

void append_prefix(std::vector<char>& buf, std::span<const std::uint32_t> counts,
                   std::span<const TokenId> ids) {
    append_u32(buf, static_cast<std::uint32_t>(ids.size()));
    append_u32(buf, static_cast<std::uint32_t>(counts.size()));
    for (auto c : counts) {
        append_u32(buf, c);
    }
    for (auto t : ids) {
        append_u32(buf, t);
    }
}

}  // namespace

const char* to_string(DumpMode mode) noexcept {
    switch (mode) {
        case DumpMode::kSan:
            return "SAN";
        case DumpMode::kMlm:
            return "MLM";
    }
    return "?";
}

void DumpHeader::validate() const {
    if (mode != DumpMode::kSan && mode != DumpMode::kMlm) {
        throw FormatError("invalid dump mode " + std::to_string(static_cast<int>(mode)));
    }
    if (mode == DumpMode::kSan && top_k != 0) {
        throw FormatError("SAN dump must have top_k = 0, got " + std::to_string(top_k));
    }
    if (mode == DumpMode::kMlm && top_k < 1) {
        throw FormatError("MLM dump must have top_k >= 1");
    }
    if (n_layers < 1 || n_heads < 1) {
        throw FormatError("n_layers and n_heads must be >= 1");
    }
}

std::vector<std::size_t> word_offsets(std::span<const std::uint32_t> subword_counts) {
    std::vector<std::size_t> offsets(subword_counts.size() + 1, 0);
    for (std::size_t w = 0; w < subword_counts.size(); ++w) {
        offsets[w + 1] = offsets[w] + subword_counts[w];
    }
    return offsets;
}

void check_record(const SanRecord& rec) {
    check_prefix(rec.subword_counts, rec.bpe_ids.size());
    const std::size_t l = rec.bpe_ids.size();
    if (rec.attn.size() != l * l) {
        throw InvalidArgument("attention matrix has " + std::to_string(rec.attn.size()) +
                              " values, expected L*L = " + std::to_string(l * l));
    }
    for (double a : rec.attn) {
        if (!std::isfinite(a)) {
            throw InvalidArgument("non-finite attention weight");
        }
    }
}

void check_record(const MlmRecord& rec, std::uint32_t top_k) {
    check_prefix(rec.subword_counts, rec.bpe_ids.size());
    const std::size_t l = rec.bpe_ids.size();
    if (rec.predictions.size() != l * top_k) {
        throw InvalidArgument("prediction table has " + std::to_string(rec.predictions.size()) +
                              " entries, expected L*top_k = " + std::to_string(l * top_k));
    }
    for (std::size_t i = 0; i < l; ++i) {
        const Prediction* row = rec.predictions.data() + i * top_k;
        for (std::size_t r = 0; r < top_k; ++r) {
            if (!std::isfinite(row[r].logit)) {
                throw InvalidArgument("non-finite logit at position " + std::to_string(i));
            }
            if (r == 0) {
                continue;
            }
            const bool ordered = row[r - 1].logit > row[r].logit ||
                                 (row[r - 1].logit == row[r].logit && row[r - 1].token < row[r].token);
            if (!ordered) {
                throw InvalidArgument("predictions at position " + std::to_string(i) +
                                      " not sorted by descending logit at rank " +
                                      std::to_string(r));
            }
        }
    }
}

std::size_t count_row_sum_violations(const SanRecord& rec, double expected_row_sum,
                                     double rel_tol) {
    const std::size_t l = rec.bpe_ids.size();
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < l; ++k) {
        double s = 0.0;
        for (std::size_t c = 0; c < l; ++c) {
            s += rec.at(k, c);
        }
        if (std::abs(s - expected_row_sum) > rel_tol * expected_row_sum) {
            ++flagged;
        }
    }
    return flagged;
}

// ---- reader ----

DumpReader::DumpReader(const std::filesystem::path& path)
    : owned_(std::make_unique<std::ifstream>(detail::open_in(path, true))), in_(owned_.get()) {
    read_header();
}

DumpReader::DumpReader(std::istream& in) : in_(&in) { read_header(); }

void DumpReader::read_header() {
    char buf[kDumpHeaderBytes];
    detail::read_required(*in_, buf, kDumpHeaderBytes, "dump header");
    if (std::memcmp(buf, kDumpMagic, 4) != 0) {
        throw FormatError("bad magic: not an SGDV dump");
    }
    const auto version = detail::get_u32(buf + 4);
    if (version != kDumpVersion) {
        throw FormatError("unsupported dump version " + std::to_string(version));
    }
    const auto mode = static_cast<unsigned char>(buf[8]);
    if (mode != 1 && mode != 2) {
        throw FormatError("invalid dump mode " + std::to_string(mode));
    }
    header_.mode = static_cast<DumpMode>(mode);
    header_.top_k = detail::get_u32(buf + 9);
    header_.n_layers = detail::get_u32(buf + 13);
    header_.n_heads = detail::get_u32(buf + 17);
    header_.validate();
}

bool DumpReader::read_prefix(std::vector<std::uint32_t>& subword_counts,
                             std::vector<TokenId>& bpe_ids) {
    char buf[8];
    if (!detail::read_exact(*in_, buf, 8, "record header")) {
        return false;
    }
    const auto l = detail::get_u32(buf);
    const auto w = detail::get_u32(buf + 4);
    if (l > kMaxTokens) {
        throw RecordError(index_, "implausible token count L = " + std::to_string(l));
    }
    if (w > l) {
        throw RecordError(index_, "word count W = " + std::to_string(w) +
                                      " exceeds token count L = " + std::to_string(l));
    }
    scratch_.resize(4 * (static_cast<std::size_t>(w) + l));
    detail::read_required(*in_, scratch_.data(), scratch_.size(), "record subword table");
    subword_counts.resize(w);
    bpe_ids.resize(l);
    const char* p = scratch_.data();
    for (auto& c : subword_counts) {
        c = detail::get_u32(p);
        p += 4;
    }
    for (auto& t : bpe_ids) {
        t = detail::get_u32(p);
        p += 4;
    }
    try {
        check_prefix(subword_counts, bpe_ids.size());
    } catch (const InvalidArgument& e) {
        throw RecordError(index_, e.what());
    }
    return true;
}

std::optional<SanRecord> DumpReader::next_san() {
    if (header_.mode != DumpMode::kSan) {
        throw ConfigError(std::string("expected a SAN dump, got ") + to_string(header_.mode));
    }
    SanRecord rec;
    if (!read_prefix(rec.subword_counts, rec.bpe_ids)) {
        return std::nullopt;
    }
    const std::size_t l = rec.bpe_ids.size();
    scratch_.resize(4 * l * l);
    detail::read_required(*in_, scratch_.data(), scratch_.size(), "attention matrix");
    rec.attn.resize(l * l);
    for (std::size_t k = 0; k < l * l; ++k) {
        rec.attn[k] = static_cast<double>(detail::get_f32(scratch_.data() + 4 * k));
    }
    try {
        check_record(rec);
    } catch (const InvalidArgument& e) {
        throw RecordError(index_, e.what());
    }
    ++index_;
    return rec;
}

std::optional<MlmRecord> DumpReader::next_mlm() {
    if (header_.mode != DumpMode::kMlm) {
        throw ConfigError(std::string("expected an MLM dump, got ") + to_string(header_.mode));
    }
    MlmRecord rec;
    if (!read_prefix(rec.subword_counts, rec.bpe_ids)) {
        return std::nullopt;
    }
    const std::size_t n = rec.bpe_ids.size() * header_.top_k;
    scratch_.resize(8 * n);
    detail::read_required(*in_, scratch_.data(), scratch_.size(), "prediction table");
    rec.predictions.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        rec.predictions[k].token = detail::get_u32(scratch_.data() + 8 * k);
        rec.predictions[k].logit = static_cast<double>(detail::get_f32(scratch_.data() + 8 * k + 4));
    }
    try {
        check_record(rec, header_.top_k);
    } catch (const InvalidArgument& e) {
        throw RecordError(index_, e.what());
    }
    ++index_;
    return rec;
}

// ---- writer ----

DumpWriter::DumpWriter(const std::filesystem::path& path, const DumpHeader& header)
    : header_(header), path_(path) {
    header_.validate();
    owned_ = std::make_unique<std::ofstream>(detail::open_out(path, true));
    out_ = owned_.get();
    write_header();
}

DumpWriter::DumpWriter(std::ostream& out, const DumpHeader& header)
    : out_(&out), header_(header) {
    header_.validate();
    write_header();
}

void DumpWriter::write_header() {
    char buf[kDumpHeaderBytes];
    std::memcpy(buf, kDumpMagic, 4);
    detail::put_u32(buf + 4, kDumpVersion);
    buf[8] = static_cast<char>(header_.mode);
    detail::put_u32(buf + 9, header_.top_k);
    detail::put_u32(buf + 13, header_.n_layers);
    detail::put_u32(buf + 17, header_.n_heads);
    out_->write(buf, kDumpHeaderBytes);
}

void DumpWriter::write(const SanRecord& rec) {
    if (header_.mode != DumpMode::kSan) {
        throw InvalidArgument("cannot write a SAN record to an MLM dump");
    }
    check_record(rec);
    scratch_.clear();
    append_prefix(scratch_, rec.subword_counts, rec.bpe_ids);
    for (double a : rec.attn) {
        const auto f = static_cast<float>(a);
        if (!std::isfinite(f)) {
            throw InvalidArgument("attention weight " + std::to_string(a) + " overflows f32");
        }
        append_f32(scratch_, f);
    }
    out_->write(scratch_.data(), static_cast<std::streamsize>(scratch_.size()));
}

void DumpWriter::write(const MlmRecord& rec) {
    if (header_.mode != DumpMode::kMlm) {
        throw InvalidArgument("cannot write an MLM record to a SAN dump");
    }
    check_record(rec, header_.top_k);
    // Distinct f64 logits can collapse to the same f32; the stored order must
    // still satisfy the tie rule.
    MlmRecord narrowed = rec;
    for (auto& p : narrowed.predictions) {
        p.logit = static_cast<double>(static_cast<float>(p.logit));
        if (!std::isfinite(p.logit)) {
            throw InvalidArgument("logit overflows f32");
        }
    }
    check_record(narrowed, header_.top_k);
    scratch_.clear();
    append_prefix(scratch_, rec.subword_counts, rec.bpe_ids);
    for (const auto& p : narrowed.predictions) {
        append_u32(scratch_, p.token);
        append_f32(scratch_, static_cast<float>(p.logit));
    }
    out_->write(scratch_.data(), static_cast<std::streamsize>(scratch_.size()));
}

void DumpWriter::close() {
    out_->flush();
    if (!*out_) {
        throw IoError("write failed: " + path_.string());
    }
    if (owned_) {
        owned_->close();
    }
}

void write_dump(const std::filesystem::path& path, const DumpHeader& header,
                std::span<const SanRecord> records) {
    if (header.mode != DumpMode::kSan) {
        throw InvalidArgument("SAN records need a SAN header");
    }
    for (const auto& r : records) {
        check_record(r);
    }
    DumpWriter w(path, header);
    for (const auto& r : records) {
        w.write(r);
    }
    w.close();
}

void write_dump(const std::filesystem::path& path, const DumpHeader& header,
                std::span<const MlmRecord> records) {
    if (header.mode != DumpMode::kMlm) {
        throw InvalidArgument("MLM records need an MLM header");
    }
    header.validate();
    for (const auto& r : records) {
        check_record(r, header.top_k);
    }
    DumpWriter w(path, header);
    for (const auto& r : records) {
        w.write(r);
    }
    w.close();
}

std::vector<SanRecord> read_san_dump(const std::filesystem::path& path, DumpHeader* header) {
    DumpReader reader(path);
    if (header) {
        *header = reader.header();
    }
    std::vector<SanRecord> out;
    while (auto rec = reader.next_san()) {
        out.push_back(std::move(*rec));
    }
    return out;
}

std::vector<MlmRecord> read_mlm_dump(const std::filesystem::path& path, DumpHeader* header) {
    DumpReader reader(path);
    if (header) {
        *header = reader.header();
    }
    std::vector<MlmRecord> out;
    while (auto rec = reader.next_mlm()) {
        out.push_back(std::move(*rec));
    }
    return out;
}

DumpValidation validate_dump(const std::filesystem::path& path, double row_sum_rel_tol) {
    DumpReader reader(path);
    DumpValidation v;
    v.header = reader.header();
    if (v.header.mode == DumpMode::kSan) {
        const double expected =
            static_cast<double>(v.header.n_layers) * static_cast<double>(v.header.n_heads);
        while (auto rec = reader.next_san()) {
            const auto flagged = count_row_sum_violations(*rec, expected, row_sum_rel_tol);
            v.flagged_rows += flagged;
            v.flagged_records += flagged > 0 ? 1 : 0;
            ++v.records;
        }
    } else {
        while (reader.next_mlm()) {
            ++v.records;
        }
    }
    return v;
}

// ---- lexicon ----

void SubwordLexicon::add(std::string word, std::vector<TokenId> ids) {
    if (word.empty()) {
        throw InvalidArgument("empty word in lexicon");
    }
    if (ids.empty()) {
        throw InvalidArgument("word '" + word + "' has an empty subword list");
    }
    if (!index_.emplace(word, words_.size()).second) {
        throw InvalidArgument("duplicate word '" + word + "' in lexicon");
    }
    words_.push_back(std::move(word));
    pieces_.push_back(std::move(ids));
}

const std::vector<TokenId>* SubwordLexicon::find(std::string_view word) const {
    auto it = index_.find(word);
    return it == index_.end() ? nullptr : &pieces_[it->second];
}

void write_lexicon(std::ostream& out, const SubwordLexicon& lex) {
    std::string line;
    for (std::size_t k = 0; k < lex.size(); ++k) {
        line = lex.word(k);
        line += '\t';
        bool first = true;
        for (TokenId t : lex.ids(k)) {
            if (!first) {
                line += ' ';
            }
            line += std::to_string(t);
            first = false;
        }
        line += '\n';
        out << line;
    }
}

SubwordLexicon read_lexicon(std::istream& in) {
    SubwordLexicon lex;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::strip_cr(raw);
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(line_no, "expected 'word<TAB>ids'");
        }
        std::string word(line.substr(0, tab));
        std::vector<TokenId> ids;
        for (std::string_view f : split_whitespace(line.substr(tab + 1))) {
            TokenId t = 0;
            if (!detail::parse_number(f, t)) {
                throw ParseError(line_no, "bad subword id '" + std::string(f) + "'");
            }
            ids.push_back(t);
        }
        try {
            lex.add(std::move(word), std::move(ids));
        } catch (const InvalidArgument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (in.bad()) {
        throw IoError("error while reading lexicon");
    }
    return lex;
}

void save_lexicon(const SubwordLexicon& lex, const std::filesystem::path& path) {
    auto out = detail::open_out(path);
    write_lexicon(out, lex);
    out.flush();
    detail::check_written(out, path);
}

SubwordLexicon load_lexicon(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_lexicon(in);
}

}  // namespace semglove
