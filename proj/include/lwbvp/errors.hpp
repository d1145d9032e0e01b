#pragma once

#include <stdexcept>
#include <string>

namespace lwbvp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-schema configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A nonlinearity was evaluated outside its domain or rejected at construction.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The linear boundary problem has no unique solution for these parameters.
class SingularConfigurationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace lwbvp
