#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace besovlab {

/// Arithmetic expression in x, y, t with constants pi and e, the operators
/// + - * / ^ (right-associative) and the functions sin, cos, tan, exp, log,
/// sqrt, abs, tanh, min, max, pow. Throws Error("bad-params") on parse errors.
class Expression {
public:
    struct Node;

    static Expression parse(std::string_view text);

    double operator()(double x, double y = 0.0, double t = 0.0) const;
    const std::string& text() const noexcept { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace besovlab
