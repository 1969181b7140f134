#pragma once

#include <stdexcept>
#include <string>

namespace memnet {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad architecture, bad config file, out-of-range knobs.
// The message names the offending key or layer.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A caller broke an operation's precondition (length mismatch, index range).
class ContractError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure: missing file, unwritable path, refusing to overwrite.
class IoError : public Error {
public:
    using Error::Error;
};

// A file existed but its content is unusable. `kind()` distinguishes the
// failure classes the formats promise to report separately.
class FormatError : public Error {
public:
    enum class Kind { Parse, Version, Checksum, Dimension, MissingEntry };

    FormatError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Failure inside one stage of the evolutionary pipeline; carries the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& msg)
        : Error("[" + stage + "] " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace memnet
