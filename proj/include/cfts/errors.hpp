#pragma once

#include <stdexcept>
#include <string>

namespace cfts {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PointNotInTimeScale : public DomainError {
public:
    explicit PointNotInTimeScale(double t);
    double point() const noexcept { return point_; }

private:
    double point_;
};

class OutsideKappaDomain : public DomainError {
public:
    using DomainError::DomainError;
};

class DenseDerivativeUnavailable : public Error {
public:
    using Error::Error;
};

class QuadratureNonConvergence : public Error {
public:
    using Error::Error;
};

/// 1 + mu(t) p == 0 somewhere the computation needs an inverse.
class NonRegressiveParameter : public Error {
public:
    using Error::Error;
};

/// Some graininess equals (1 - alpha) / alpha and the kernel must be inverted.
class NonRegressiveKernel : public Error {
public:
    using Error::Error;
};

/// K(alpha) == 0 or p(alpha) not regressive for the linear equation.
class NotRegressive : public Error {
public:
    using Error::Error;
};

class NotContractive : public Error {
public:
    NotContractive(const std::string& what, double q, double max_window)
        : Error(what), q_(q), max_window_(max_window) {}
    double contraction_q() const noexcept { return q_; }
    /// Longest b - a for which the contraction condition holds; <= 0 when none does.
    double max_window() const noexcept { return max_window_; }

private:
    double q_;
    double max_window_;
};

class MaxIterationsExceeded : public Error {
public:
    using Error::Error;
};

/// Malformed text input (time-scale descriptions, scenario configs).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line) : Error(what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace cfts
