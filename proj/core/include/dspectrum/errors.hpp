#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dspectrum {

/// Malformed input text. `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Argument outside the domain of an operation (bad node index, undefined threshold, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A dynamical-system property the engine relies on (contractivity, termination) was violated.
class PropertyViolation : public std::runtime_error {
public:
    PropertyViolation(std::size_t node, std::size_t step, const std::string& what)
        : std::runtime_error(what), node_(node), step_(step) {}

    std::size_t node() const noexcept { return node_; }
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t node_;
    std::size_t step_;
};

}  // namespace dspectrum
