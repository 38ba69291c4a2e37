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

#include "semglove/config.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "io_util.hpp"
#include "semglove/error.hpp"

namespace semglove {

namespace {

constexpr ConfigKey kKeys[] = {
    // inputs and outputs
    {"corpus", "corpus", ValueKind::kPath, "", "whitespace-tokenized corpus, one sentence per line"},
    {"vocab", "vocab", ValueKind::kPath, "", "vocabulary file"},
    {"dump", "dump", ValueKind::kPath, "", "SGDV dump"},
    {"lexicon", "lexicon", ValueKind::kPath, "", "word to subword lexicon"},
    {"support", "support", ValueKind::kPath, "", "co-occurrence file whose pairs are kept"},
    {"values", "values", ValueKind::kPath, "", "co-occurrence file supplying the values"},
    {"cooc", "cooc", ValueKind::kPath, "", "co-occurrence records to train on"},
    {"in", "in", ValueKind::kPath, "", "input co-occurrence file"},
    {"out", "out", ValueKind::kPath, "", "output file"},
    {"vectors", "vectors", ValueKind::kPath, "", "word vectors file"},
    {"dataset", "dataset", ValueKind::kPath, "", "similarity dataset (word1 word2 score)"},
    {"work_dir", "work-dir", ValueKind::kPath, "", "directory for pipeline intermediates"},
    {"word", "word", ValueKind::kText, "", "query word"},
    // vocabulary
    {"min_count", "min-count", ValueKind::kInt, "5", "minimum word frequency"},
    // builders
    {"source", "source", ValueKind::kSource, "window", "pipeline statistics: window, san or mlm"},
    {"window", "window", ValueKind::kInt, "5", "context words on each side"},
    {"symmetric", "symmetric", ValueKind::kBool, "true", "count right context as well as left"},
    {"select_top", "select-top", ValueKind::kInt, "5", "attended words kept per target"},
    {"distance", "distance", ValueKind::kDistance, "division", "weighting: division or rank"},
    {"top", "top", ValueKind::kInt, "10", "predictions kept per position"},
    {"tolerance", "tolerance", ValueKind::kReal, "0.01", "relative attention row-sum tolerance"},
    // training
    {"dim", "dim", ValueKind::kInt, "300", "vector dimension"},
    {"x_max", "xmax", ValueKind::kReal, "10", "weighting cutoff"},
    {"alpha", "alpha", ValueKind::kReal, "0.75", "weighting exponent"},
    {"lr", "lr", ValueKind::kReal, "0.05", "AdaGrad learning rate"},
    {"iters", "iters", ValueKind::kInt, "100", "training epochs"},
    {"grad_clip", "grad-clip", ValueKind::kReal, "100", "per-scalar gradient clamp, <= 0 disables"},
    {"seed", "seed", ValueKind::kInt, "1", "random seed for shuffling and initialization"},
    {"threads", "threads", ValueKind::kInt, "1", "worker threads"},
    // inspection
    {"k", "k", ValueKind::kInt, "10", "neighbors to print"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool parse_bool(std::string_view v, bool& out) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        out = false;
        return true;
    }
    return false;
}

bool parse_int(std::string_view v, std::int64_t& out) {
    double d = 0.0;
    if (!detail::parse_number(v, d) || !std::isfinite(d) || d != std::floor(d) ||
        std::abs(d) > 9.0e15) {
        return false;
    }
    out = static_cast<std::int64_t>(d);
    return true;
}

void check_value(const ConfigKey& key, std::string_view value) {
    bool ok = true;
    switch (key.kind) {
        case ValueKind::kInt: {
            std::int64_t v = 0;
            ok = parse_int(value, v);
            break;
        }
        case ValueKind::kReal: {
            double v = 0.0;
            ok = detail::parse_number(value, v) && std::isfinite(v);
            break;
        }
        case ValueKind::kBool: {
            bool v = false;
            ok = parse_bool(value, v);
            break;
        }
        case ValueKind::kDistance:
            ok = value == "division" || value == "rank";
            break;
        case ValueKind::kSource:
            ok = value == "window" || value == "san" || value == "mlm";
            break;
        case ValueKind::kText:
        case ValueKind::kPath:
            break;
    }
    if (!ok) {
        throw UsageError("invalid value '" + std::string(value) + "' for " + std::string(key.key));
    }
}

template <typename Fn>
auto as_usage(Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

}  // namespace

const char* to_string(Source s) noexcept {
    switch (s) {
        case Source::kWindow:
            return "window";
        case Source::kSan:
            return "san";
        case Source::kMlm:
            return "mlm";
    }
    return "?";
}

PipelineConfig::PipelineConfig() {
    for (const auto& k : kKeys) {
        values_.emplace(std::string(k.key), std::string(k.default_value));
    }
}

std::span<const ConfigKey> PipelineConfig::keys() { return kKeys; }

const ConfigKey* PipelineConfig::find_key(std::string_view key) {
    for (const auto& k : kKeys) {
        if (k.key == key) {
            return &k;
        }
    }
    return nullptr;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
    const ConfigKey* entry = find_key(key);
    if (entry == nullptr) {
        throw UsageError("unknown config key '" + std::string(key) + "'");
    }
    check_value(*entry, value);
    values_.find(key)->second = std::string(value);
}

const std::string& PipelineConfig::get(std::string_view key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw UsageError("unknown config key '" + std::string(key) + "'");
    }
    return it->second;
}

std::int64_t PipelineConfig::get_int(std::string_view key) const {
    std::int64_t v = 0;
    parse_int(get(key), v);
    return v;
}

double PipelineConfig::get_real(std::string_view key) const {
    double v = 0.0;
    detail::parse_number(get(key), v);
    return v;
}

bool PipelineConfig::get_bool(std::string_view key) const {
    bool v = false;
    parse_bool(get(key), v);
    return v;
}

std::filesystem::path PipelineConfig::get_path(std::string_view key) const {
    const auto& v = get(key);
    if (v.empty()) {
        const ConfigKey* entry = find_key(key);
        throw UsageError("missing required --" + std::string(entry->flag));
    }
    return v;
}

void PipelineConfig::load(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(detail::strip_cr(raw));
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        try {
            set(key, value);
        } catch (const UsageError& e) {
            throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void PipelineConfig::load_file(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    load(in);
}

std::string PipelineConfig::to_text() const {
    std::string out;
    for (const auto& k : kKeys) {
        out += k.key;
        out += '=';
        out += get(k.key);
        out += '\n';
    }
    return out;
}

WindowConfig PipelineConfig::window_config() const {
    WindowConfig cfg;
    cfg.window = static_cast<int>(get_int("window"));
    cfg.symmetric = get_bool("symmetric");
    as_usage([&] { cfg.validate(); });
    return cfg;
}

SanConfig PipelineConfig::san_config() const {
    SanConfig cfg;
    cfg.window = static_cast<int>(get_int("window"));
    cfg.select_top = static_cast<int>(get_int("select_top"));
    cfg.distance = parse_distance(get("distance"));
    as_usage([&] { cfg.validate(); });
    return cfg;
}

MlmConfig PipelineConfig::mlm_config() const {
    MlmConfig cfg;
    cfg.top_tokens = static_cast<int>(get_int("top"));
    cfg.distance = parse_distance(get("distance"));
    if (cfg.top_tokens < 1) {
        throw UsageError("top must be >= 1");
    }
    return cfg;
}

TrainConfig PipelineConfig::train_config() const {
    TrainConfig cfg;
    cfg.dim = static_cast<int>(get_int("dim"));
    cfg.x_max = get_real("x_max");
    cfg.alpha = get_real("alpha");
    cfg.lr = get_real("lr");
    cfg.iterations = static_cast<int>(get_int("iters"));
    cfg.grad_clip = get_real("grad_clip");
    cfg.seed = static_cast<std::uint64_t>(get_int("seed"));
    cfg.threads = threads();
    as_usage([&] { cfg.validate(); });
    return cfg;
}

Source PipelineConfig::source() const {
    const auto& s = get("source");
    return s == "san" ? Source::kSan : s == "mlm" ? Source::kMlm : Source::kWindow;
}

int PipelineConfig::threads() const {
    const auto t = get_int("threads");
    if (t < 1 || t > 4096) {
        throw UsageError("threads must be in [1, 4096]");
    }
    return static_cast<int>(t);
}

}  // namespace semglove
