#pragma once

#include <stdexcept>
#include <string>

namespace edgelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller misuse: wrong dimension, wrong code path, empty input.
class UsageError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class ContourError : public Error {
public:
    using Error::Error;
};

class DegenerateSaddle : public Error {
public:
    using Error::Error;
};

// Two evaluation routes that must agree did not.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace edgelab
