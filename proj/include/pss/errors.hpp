#pragma once

#include <stdexcept>
#include <string>

namespace pss {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Division by sin(x1) requested at an angle too close to 0 or pi.
class SingularAngle : public Error {
public:
    using Error::Error;
};

class NoRoot : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class MissingConfig : public Error {
public:
    using Error::Error;
};

class MismatchedScenarios : public Error {
public:
    using Error::Error;
};

/// Malformed scenario file. line() is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// An output file could not be written.
class OutputError : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state component.
class NonfiniteState : public Error {
public:
    NonfiniteState(double time, const std::string& what)
        : Error(what + " at t = " + std::to_string(time) + " s"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace pss
