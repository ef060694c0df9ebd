#pragma once

#include <stdexcept>
#include <string>

namespace sibif {

/// Base class for all recoverable numerical failures raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Zero pivot in a tridiagonal solve; usually means the point sits on a bifurcation.
class SingularJacobian : public Error {
public:
    using Error::Error;
};

class SingularBordered : public Error {
public:
    using Error::Error;
};

class StepFailed : public Error {
public:
    using Error::Error;
};

class AmbiguousEvent : public Error {
public:
    using Error::Error;
};

class SwitchFailed : public Error {
public:
    using Error::Error;
};

class AmbiguousType : public Error {
public:
    using Error::Error;
};

class NonPositive : public Error {
public:
    using Error::Error;
};

class BlowUp : public Error {
public:
    BlowUp(const std::string& what, double t) : Error(what), time(t) {}
    double time;
};

class Timeout : public Error {
public:
    using Error::Error;
};

/// File output or config input failure; the message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sibif
