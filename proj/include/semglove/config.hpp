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

// Flat key=value configuration shared by every subcommand. A config file
// holds one "key = value" per line; '#' starts a comment line. Command line
// flags are applied after the file and win.

#ifndef SEMGLOVE_CONFIG_HPP
#define SEMGLOVE_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "semglove/cooc_mlm.hpp"
#include "semglove/cooc_san.hpp"
#include "semglove/cooc_window.hpp"
#include "semglove/trainer.hpp"

namespace semglove {

enum class ValueKind { kInt, kReal, kBool, kText, kPath, kDistance, kSource };

struct ConfigKey {
    std::string_view key;   // config file name, e.g. "x_max"
    std::string_view flag;  // long flag without dashes, e.g. "xmax"
    ValueKind kind;
    std::string_view default_value;
    std::string_view help;
};

/// Which co-occurrence builder the pipeline subcommand runs.
enum class Source { kWindow, kSan, kMlm };

const char* to_string(Source s) noexcept;

class PipelineConfig {
public:
    /// All keys at their defaults.
    PipelineConfig();

    static std::span<const ConfigKey> keys();
    /// nullptr for an unknown key.
    static const ConfigKey* find_key(std::string_view key);

    /// Throws UsageError for an unknown key or a value of the wrong type.
    void set(std::string_view key, std::string_view value);
    const std::string& get(std::string_view key) const;

    std::int64_t get_int(std::string_view key) const;
    double get_real(std::string_view key) const;
    bool get_bool(std::string_view key) const;
    /// Throws UsageError when the path is unset.
    std::filesystem::path get_path(std::string_view key) const;
    bool has(std::string_view key) const { return !get(key).empty(); }

    /// Applies every line of a config file. Throws UsageError naming the
    /// line and key on the first problem.
    void load(std::istream& in);
    void load_file(const std::filesystem::path& path);

    /// "key=value" lines in declaration order.
    std::string to_text() const;

    // Module configs. Domain violations are reported as UsageError.
    WindowConfig window_config() const;
    SanConfig san_config() const;
    MlmConfig mlm_config() const;
    TrainConfig train_config() const;
    Source source() const;
    int threads() const;

private:
    std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace semglove

#endif  // SEMGLOVE_CONFIG_HPP
