#pragma once

#include <stdexcept>
#include <string>

namespace gridp2p {

/// Argument outside the mathematical domain of an operation (negative demand, zero price, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation invoked outside its documented precondition.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Scenario parameters that are individually valid but cannot run, e.g. a cost slope
/// too small for the peak price to deter grid purchases at some slot.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario document rejected by validation. `path()` names the offending field,
/// e.g. `grid.threshold` or `prosumers[3].net_energy[5]`.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace gridp2p
