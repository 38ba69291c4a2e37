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

#ifndef SEMGLOVE_ERROR_HPP
#define SEMGLOVE_ERROR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace semglove {

/// Base of every exception thrown by the library. `category()` is a short
/// machine-parseable tag used by the command line front end.
class Error : public std::runtime_error {
public:
    Error(const char* category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    const char* category() const noexcept { return category_; }

private:
    const char* category_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

/// Malformed text input. Line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse", "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Malformed binary input (bad magic, truncation, invariant violation).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error("format", what) {}
};

/// A single record inside an otherwise well-formed stream is invalid.
class RecordError : public Error {
public:
    RecordError(std::uint64_t record, const std::string& what)
        : Error("record", "record " + std::to_string(record) + ": " + what), record_(record) {}

    std::uint64_t record() const noexcept { return record_; }

private:
    std::uint64_t record_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

/// Bad command line or configuration file (unknown key, malformed value).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("usage", what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid", what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

}  // namespace semglove

#endif  // SEMGLOVE_ERROR_HPP
