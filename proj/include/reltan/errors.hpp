#pragma once

#include <stdexcept>
#include <string>

namespace reltan {

// Base of every library error. Each subclass maps to one CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: syntax, unknown variables, bad files, mismatched rings.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : InputError(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

class RingMismatch : public InputError {
public:
    using InputError::InputError;
};

class NonInvertibleCoefficient : public InputError {
public:
    using InputError::InputError;
};

class ExponentOverflow : public Error {
public:
    using Error::Error;
};

// A Groebner computation hit a pair, degree or wall-clock cap.
class ResourceExhausted : public Error {
public:
    using Error::Error;
};

// A geometric precondition or a cross-check did not hold.
class HypothesisFailure : public Error {
public:
    using Error::Error;
};

class NotZeroDimensional : public HypothesisFailure {
public:
    using HypothesisFailure::HypothesisFailure;
};

class SeedDisagreement : public HypothesisFailure {
public:
    using HypothesisFailure::HypothesisFailure;
};

class EmptyRelativeDual : public HypothesisFailure {
public:
    EmptyRelativeDual() : HypothesisFailure("EMPTY (Z \xe2\x8a\x86 X_sing)") {}
};

class PositiveDimensionalFiber : public HypothesisFailure {
public:
    PositiveDimensionalFiber()
        : HypothesisFailure("critical fiber is positive-dimensional (data point in DL^inf)") {}
};

class NotOnDataLocus : public HypothesisFailure {
public:
    using HypothesisFailure::HypothesisFailure;
};

}  // namespace reltan
