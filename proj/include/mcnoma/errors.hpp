// SPDX-License-Identifier: Apache-2.0
//
// mcnoma - resource allocation and scheduling for downlink multicarrier NOMA
// Copyright (C) 2026 The mcnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MCNOMA_ERRORS_HPP
#define MCNOMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcnoma
{

// Caller violated a documented precondition (negative budget, bad NCR order, ...)
class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Inputs have inconsistent shapes or non-physical channel entries
class StructuralError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// SystemConfig breaks one of its invariants (M < 2, sum of caps < P_max, ...)
class InfeasibleConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Scheduler state cannot be used for the requested mode
class StateError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// Should be unreachable; signals a numerical bug rather than bad input
class InternalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace mcnoma

#endif
