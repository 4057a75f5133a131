// Copyright 2026 The fqcontrol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FQC_ERRORS_H
#define FQC_ERRORS_H

#include <stdexcept>
#include <string>

namespace fqc {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A (y, z) pair that does not describe a positive semidefinite unit-trace operator.
struct NotAState : Error {
    using Error::Error;
};

/// Kraus operators whose completeness relation fails.
struct ChannelNotTracePreserving : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
struct DomainError : Error {
    using Error::Error;
};

/// The channel parameters make the analytic inverse undefined.
struct DegenerateChannel : Error {
    using Error::Error;
};

/// Optimizer restarts ended at materially different objective values.
struct OptimizerStalled : Error {
    using Error::Error;
};

struct NonPhysicalInput : Error {
    using Error::Error;
};

struct NonPositiveInput : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct SingularDesign : Error {
    using Error::Error;
};

struct EmptyWindow : Error {
    using Error::Error;
};

/// Wraps a solver failure with the sweep grid point at which it happened.
struct SweepError : Error {
    using Error::Error;
};

}  // namespace fqc

#endif
