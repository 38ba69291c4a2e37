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

#include "semglove/cooc_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "io_util.hpp"
#include "semglove/error.hpp"

namespace semglove {

namespace {

constexpr std::size_t kMinCompactBatch = std::size_t{1} << 16;

bool key_less(const CoocRecord& a, const CoocRecord& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
}

bool same_key(const CoocRecord& a, const CoocRecord& b) { return a.i == b.i && a.j == b.j; }

}  // namespace

CoocMatrix::CoocMatrix(std::uint32_t vocab_size) : vocab_size_(vocab_size) {}

void CoocMatrix::accumulate(std::uint32_t i, std::uint32_t j, double w) {
    if (i == j) {
        throw InvalidArgument("self co-occurrence (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") rejected");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw InvalidArgument("co-occurrence weight must be finite and > 0");
    }
    if (vocab_size_ != 0 && (i >= vocab_size_ || j >= vocab_size_)) {
        throw InvalidArgument("word id out of range for vocab_size " + std::to_string(vocab_size_));
    }
    pending_.push_back({i, j, w});
    if (pending_.size() >= std::max(kMinCompactBatch, entries_.size())) {
        compact();
    }
}

void CoocMatrix::merge(const CoocMatrix& other) {
    if (other.vocab_size_ != vocab_size_) {
        throw InvalidArgument("cannot merge matrices with different vocab sizes");
    }
    const auto src = other.entries();
    pending_.insert(pending_.end(), src.begin(), src.end());
    compact();
}

void CoocMatrix::compact() const {
    if (pending_.empty()) {
        return;
    }
    std::stable_sort(pending_.begin(), pending_.end(), key_less);

    std::vector<CoocRecord> out;
    out.reserve(entries_.size() + pending_.size());
    auto e = entries_.begin();
    auto p = pending_.begin();
    while (e != entries_.end() || p != pending_.end()) {
        CoocRecord cur;
        if (p == pending_.end() || (e != entries_.end() && !key_less(*p, *e))) {
            cur = *e++;
        } else {
            cur = *p++;
        }
        while (p != pending_.end() && same_key(*p, cur)) {
            cur.x += p->x;
            ++p;
        }
        out.push_back(cur);
    }
    entries_ = std::move(out);
    pending_.clear();
}

std::size_t CoocMatrix::nnz() const {
    compact();
    return entries_.size();
}

std::span<const CoocRecord> CoocMatrix::entries() const {
    compact();
    return entries_;
}

std::span<const CoocRecord> CoocMatrix::row(std::uint32_t i) const {
    compact();
    auto lo = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const CoocRecord& r, std::uint32_t v) { return r.i < v; });
    auto hi = std::upper_bound(lo, entries_.end(), i,
                               [](std::uint32_t v, const CoocRecord& r) { return v < r.i; });
    return {lo, hi};
}

double CoocMatrix::get(std::uint32_t i, std::uint32_t j) const {
    const auto r = row(i);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const CoocRecord& rec, std::uint32_t v) { return rec.j < v; });
    return (it != r.end() && it->j == j) ? it->x : 0.0;
}

bool CoocMatrix::contains(std::uint32_t i, std::uint32_t j) const { return get(i, j) > 0.0; }

double CoocMatrix::sum() const {
    double s = 0.0;
    for (const auto& r : entries()) {
        s += r.x;
    }
    return s;
}

bool approx_equal(const CoocMatrix& a, const CoocMatrix& b, double rel_tol) {
    const auto ea = a.entries();
    const auto eb = b.entries();
    if (ea.size() != eb.size()) {
        return false;
    }
    for (std::size_t k = 0; k < ea.size(); ++k) {
        if (!same_key(ea[k], eb[k])) {
            return false;
        }
        if (rel_tol == 0.0) {
            if (ea[k].x != eb[k].x) {
                return false;
            }
        } else if (std::abs(ea[k].x - eb[k].x) >
                   rel_tol * std::max(std::abs(ea[k].x), std::abs(eb[k].x))) {
            return false;
        }
    }
    return true;
}

void write_records(std::ostream& out, std::span<const CoocRecord> records) {
    constexpr std::size_t kBatch = 4096;
    std::vector<char> buf(kBatch * kCoocRecordBytes);
    for (std::size_t start = 0; start < records.size(); start += kBatch) {
        const std::size_t n = std::min(kBatch, records.size() - start);
        char* dst = buf.data();
        for (std::size_t k = 0; k < n; ++k, dst += kCoocRecordBytes) {
            const auto& r = records[start + k];
            detail::put_u32(dst, r.i);
            detail::put_u32(dst + 4, r.j);
            detail::put_f64(dst + 8, r.x);
        }
        out.write(buf.data(), static_cast<std::streamsize>(n * kCoocRecordBytes));
    }
}

std::vector<CoocRecord> read_records(std::istream& in) {
    std::vector<CoocRecord> records;
    char buf[kCoocRecordBytes];
    while (true) {
        in.read(buf, kCoocRecordBytes);
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) {
            break;
        }
        if (got != kCoocRecordBytes) {
            throw FormatError("trailing partial record: " + std::to_string(got) + " of " +
                              std::to_string(kCoocRecordBytes) + " bytes after record " +
                              std::to_string(records.size()));
        }
        records.push_back({detail::get_u32(buf), detail::get_u32(buf + 4), detail::get_f64(buf + 8)});
    }
    if (in.bad()) {
        throw IoError("error while reading co-occurrence records");
    }
    return records;
}

void save_records(const std::filesystem::path& path, std::span<const CoocRecord> records) {
    auto out = detail::open_out(path, true);
    write_records(out, records);
    out.flush();
    detail::check_written(out, path);
}

std::vector<CoocRecord> load_records(const std::filesystem::path& path) {
    auto in = detail::open_in(path, true);
    return read_records(in);
}

void save_bin(const CoocMatrix& m, const std::filesystem::path& path) {
    save_records(path, m.entries());
}

CoocMatrix load_bin(const std::filesystem::path& path, std::uint32_t vocab_size) {
    const auto records = load_records(path);
    if (vocab_size == 0) {
        for (const auto& r : records) {
            vocab_size = std::max({vocab_size, r.i + 1, r.j + 1});
        }
    }
    CoocMatrix m(vocab_size);
    m.reserve_pending(records.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        try {
            m.accumulate(records[k].i, records[k].j, records[k].x);
        } catch (const InvalidArgument& e) {
            throw RecordError(k, e.what());
        }
    }
    m.compact();
    return m;
}

void shuffle_records(std::vector<CoocRecord>& records, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(records.begin(), records.end(), rng);
}

void shuffle_file(const std::filesystem::path& in, const std::filesystem::path& out,
                  std::uint64_t seed) {
    auto records = load_records(in);
    shuffle_records(records, seed);
    save_records(out, records);
}

}  // namespace semglove
