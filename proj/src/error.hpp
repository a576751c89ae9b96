// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sedd {

enum class ErrorCode {
    Argument = 1,
    Shape = 2,
    Config = 3,
    Io = 4,
    Format = 5,
    Corrupt = 6,
    EmptyCorpus = 7,
    Diverged = 8,
    Validity = 9,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& w) : Error(ErrorCode::Shape, w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCode::Config, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};
struct FormatError : Error {
    explicit FormatError(const std::string& w) : Error(ErrorCode::Format, w) {}
};
struct CorruptError : Error {
    explicit CorruptError(const std::string& w) : Error(ErrorCode::Corrupt, w) {}
};

}  // namespace sedd
