#pragma once

#include <stdexcept>
#include <string>

namespace opjensen {

// Parse failure in a function specifier string; `position` is the byte
// offset of the offending character.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Spectrum has an eigenvalue <= 0 where 0 < m is required.
class PositivityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// m == M: the operator is scalar, the enclosing interval degenerates.
class DegenerateSpectrumError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A point fell outside the domain of a scalar function.
class FunctionDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A sampled value of f (or h) was negative where nonnegativity is required.
class NonnegativityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bisection found no sign change over the bracket.
class BracketingError : public std::runtime_error {
public:
    BracketingError(const std::string& what, double f_lo, double f_hi)
        : std::runtime_error(what), f_lo_(f_lo), f_hi_(f_hi) {}
    double f_lo() const noexcept { return f_lo_; }
    double f_hi() const noexcept { return f_hi_; }

private:
    double f_lo_, f_hi_;
};

// f'' changes sign inside a subdivision piece.
class InvalidSubdivisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ObjectiveDomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StationaryPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace opjensen
