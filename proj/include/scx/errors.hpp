#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace scx {

/// Base class for all recoverable numeric/config failures. `name()` is the
/// stable identifier surfaced by the CLI (exit code 2 paths).
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& what) : Error("SingularMatrix", what) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error("NoConvergence", what) {}
};

struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& what) : Error("NotPositiveDefinite", what) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& what) : Error("NotHermitian", what) {}
};

struct BadWindow : Error {
    explicit BadWindow(const std::string& what) : Error("BadWindow", what) {}
};

struct OutOfWindow : Error {
    explicit OutOfWindow(const std::string& what) : Error("OutOfWindow", what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error("ValidationError", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace scx
