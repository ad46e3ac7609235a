#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition failures on operation inputs (empty clip, non-positive
// duration, empty decision sequence, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Out-of-range bounds; the message names the offending bound.
class RangeError : public Error {
public:
    using Error::Error;
};

// Scripted fixture problems: malformed file, duplicate key, or a missing
// record looked up at run time. Messages name the sample and stage.
class FixtureError : public Error {
public:
    using Error::Error;
};

// Wire message failed schema validation (unknown field, missing required
// field, out-of-range roi_index, type/endpoint mismatch).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Transport-level failure talking to a remote controller. Retriable.
class NetworkError : public Error {
public:
    explicit NetworkError(const std::string& what, bool retriable = true)
        : Error(what), retriable_(retriable) {}
    bool retriable() const { return retriable_; }

private:
    bool retriable_;
};

// A cloud-bound payload failed the data-minimization inspection. Hard failure.
class PrivacyViolationError : public Error {
public:
    explicit PrivacyViolationError(const std::string& reason)
        : Error("privacy violation: " + reason), reason_(reason) {}
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

// Run-configuration file problems.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Dataset file problems; messages carry file + line context.
class DatasetError : public Error {
public:
    using Error::Error;
};

// Scoring preconditions (missing gold answer for a trace).
class ScoringError : public Error {
public:
    using Error::Error;
};

}  // namespace cascade
