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

#ifndef SEMGLOVE_CLI_HPP
#define SEMGLOVE_CLI_HPP

#include <iosfwd>
#include <string>

namespace semglove {

/// Exit codes of the command line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// "semglove <version> (...)"
std::string version_string();

/// Runs one command line. Results go to `out`, progress and the one-line
/// "error[category]: message" diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semglove

#endif  // SEMGLOVE_CLI_HPP
