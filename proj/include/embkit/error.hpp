#pragma once

#include <stdexcept>
#include <string>

namespace embkit {

// Base class for all toolkit errors. Subclasses mirror the failure
// categories surfaced by the library: callers that only need to bail can
// catch Error, callers that branch can catch the specific type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DuplicateWordError : public Error {
public:
    using Error::Error;
};

class MissingWordError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace embkit
