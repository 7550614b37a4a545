#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fdcloud {

// Invalid argument outside the mathematical domain of an operation
// (negative density, alpha <= -1, d outside 3..9, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid run configuration (tolerances, grid sizes, s_start, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for every failure of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double partial_value, double err_est)
        : NumericalError(what), partial_value_(partial_value), err_est_(err_est) {}

    double partial_value() const noexcept { return partial_value_; }
    double err_est() const noexcept { return err_est_; }

private:
    double partial_value_;
    double err_est_;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepLimitError : public NumericalError {
public:
    StepLimitError(const std::string& what, double t) : NumericalError(what), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

// Finite-time explosion or non-finite state; carries the last accepted state.
class BlowUpError : public NumericalError {
public:
    BlowUpError(const std::string& what, double t, std::vector<double> last_state)
        : NumericalError(what), t_(t), last_state_(std::move(last_state)) {}

    double t() const noexcept { return t_; }
    const std::vector<double>& last_state() const noexcept { return last_state_; }

private:
    double t_;
    std::vector<double> last_state_;
};

// A trajectory left the open positive quadrant.
class PositivityError : public NumericalError {
public:
    PositivityError(const std::string& what, std::vector<double> offending_s)
        : NumericalError(what), offending_s_(std::move(offending_s)) {}

    const std::vector<double>& offending_s() const noexcept { return offending_s_; }

private:
    std::vector<double> offending_s_;
};

// Evaluation of e^{-2s} y (or similar) left the representable range.
class EvaluationError : public NumericalError {
public:
    EvaluationError(const std::string& what, double s) : NumericalError(what), s_(s) {}
    double s() const noexcept { return s_; }

private:
    double s_;
};

// A computed quantity contradicts a structural property that must hold.
class ConsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace fdcloud
