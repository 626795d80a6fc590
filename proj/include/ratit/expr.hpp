#ifndef RATIT_EXPR_HPP_
#define RATIT_EXPR_HPP_

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ratit::expr {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// One-variable expression over x, + - * / ^, cos sin exp log sqrt and
/// numeric literals (scientific notation allowed). '^' binds right.
///
///   expr   := term { ('+' | '-') term }
///   term   := unary { ('*' | '/') unary }
///   unary  := ('+' | '-') unary | power
///   power  := primary [ '^' unary ]
///   primary:= NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
class Expression {
public:
    struct Node;

    Expression() = default;  // empty; parse() produces a usable one
    static Expression parse(std::string_view source);
    double operator()(double x) const;
    const std::string& source() const { return source_; }

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace ratit::expr

#endif
