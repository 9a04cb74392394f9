// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bifuq {

/// Base of every error raised by the library. Carries the name of the module
/// that raised it so front ends can report where a run failed.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error("[" + module + "] " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Caller broke a documented precondition (size mismatch, malformed index set).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Input lies outside the domain where the quantity is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method did not converge or a linear system was singular.
class NumericalFailure : public Error {
public:
    NumericalFailure(std::string module, const std::string& what, std::ptrdiff_t index = -1)
        : Error(std::move(module), what), index_(index) {}

    /// Index reached when the failure occurred (eigenvalue index, step, point); -1 if none.
    std::ptrdiff_t index() const noexcept { return index_; }

private:
    std::ptrdiff_t index_;
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// Sample set cannot support a density estimate (e.g. all values equal).
class DegenerateSample : public Error {
public:
    using Error::Error;
};

}  // namespace bifuq
