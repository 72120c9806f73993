#pragma once

#include <stdexcept>
#include <string>

namespace tsnsim {

/// Precondition violation by the caller. These are programming errors,
/// not runtime conditions, so they derive from logic_error.
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Topology or scenario content that fails validation. The message names
/// the offending element.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A file that cannot be opened or read. Distinct from ValidationError so
/// callers can tell a bad path from bad content.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Metric query over a window that contains no samples.
struct NoSamplesError : std::runtime_error {
    explicit NoSamplesError(const std::string& what) : std::runtime_error(what) {}
};

/// The error series never settles under the requested threshold.
struct NotConvergedError : std::runtime_error {
    explicit NotConvergedError(const std::string& what) : std::runtime_error(what) {}
};

/// A time projection was requested before any sync has been accepted.
struct NotYetSynchronized : std::runtime_error {
    explicit NotYetSynchronized(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsnsim
