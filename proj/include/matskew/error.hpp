/*
 * Copyright 2026 The matskew Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace matskew {

// Invalid numerical argument (non-finite, out of the mathematical domain).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A parameter sits on the boundary of its family (e.g. a zero GIG rate),
// or a density is infinite at the requested point.
class BoundaryError : public DomainError {
public:
    using DomainError::DomainError;
};

// Caller mistakes: mismatched dimensions, empty inputs, bad configuration.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input file; the message carries file and line.
class InputError : public UsageError {
public:
    using UsageError::UsageError;
};

// Failure inside the fitting loop that cannot be repaired.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace matskew
