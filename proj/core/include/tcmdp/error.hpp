#pragma once

#include <stdexcept>
#include <string>

namespace tcmdp {

//! Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! A function produced a non-finite value at some evaluation point.
class EvaluationError : public Error {
public:
    using Error::Error;
};

//! No observed (a, g) pair matches a conditional query.
class EmptyConditional : public Error {
public:
    using Error::Error;
};

//! A partition or basis would exceed the configured size budget.
class CellBudgetError : public Error {
public:
    using Error::Error;
};

//! Invalid or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

//! Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

//! Linear algebra or fixed point failure.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace tcmdp
