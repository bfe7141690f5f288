#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace gmfc {

/// Invalid argument or violated precondition (bad sizes, n = 0, asymmetric input, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver. Carries the label and time of failure when known.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::optional<std::size_t> label = std::nullopt,
                std::optional<double> time = std::nullopt)
        : std::runtime_error(what), label_(label), time_(time) {}

    [[nodiscard]] std::optional<std::size_t> label() const noexcept { return label_; }
    [[nodiscard]] std::optional<double> time() const noexcept { return time_; }

private:
    std::optional<std::size_t> label_;
    std::optional<double> time_;
};

/// Malformed problem file or expression. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::string field = {})
        : std::runtime_error(what), line_(line), field_(std::move(field)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace gmfc
