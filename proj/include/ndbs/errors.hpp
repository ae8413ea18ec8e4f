/**
 * Copyright 2026 Mismatch Sampler Contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NDBS_ERRORS_HPP
#define NDBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ndbs {

/// Input failed validation (bad dimensions, out-of-domain parameter, malformed file).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Request exceeds a hard capacity limit of an exponential-cost routine.
/// The message names the limit so callers can route to a cheaper path.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ndbs

#endif
