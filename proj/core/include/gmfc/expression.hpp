#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace gmfc {

/// Small arithmetic expression in the variables `u` and `v`.
///
/// Grammar: numbers, u, v, pi, e, + - * / ^ (right-assoc), unary minus,
/// parentheses, and the functions exp log sqrt sin cos tanh abs min max pow.
/// Parsed once, evaluated many times; immutable and thread-safe after parsing.
class Expression {
public:
    /// Throws ParseError with the column of the offending token.
    static Expression parse(std::string_view text);

    [[nodiscard]] double operator()(double u, double v = 0.0) const;
    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    /// True when the expression mentions v.
    [[nodiscard]] bool uses_v() const noexcept { return uses_v_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
    bool uses_v_ = false;
};

}  // namespace gmfc
