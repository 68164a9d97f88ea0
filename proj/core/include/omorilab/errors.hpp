// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_ERRORS_HPP
#define OMORILAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace omorilab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input-data violation, carrying the offending file and line when known.
class ValidationError : public Error {
public:
    ValidationError(std::string file, long line, const std::string& what)
        : Error(line > 0 ? file + ":" + std::to_string(line) + ": " + what
                         : (file.empty() ? what : file + ": " + what)),
          file_(std::move(file)),
          line_(line) {}

    explicit ValidationError(const std::string& what) : ValidationError("", 0, what) {}

    const std::string& file() const { return file_; }
    long line() const { return line_; }

private:
    std::string file_;
    long line_ = 0;
};

/// Raised when a regression cannot be performed (too few points, degenerate range).
class FitError : public Error {
public:
    using Error::Error;
};

} // namespace omorilab

#endif
