#include "ratit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace ratit::expr {

struct Expression::Node {
    enum class Kind { number, variable, unary_fn, negate, add, sub, mul, div, pow };
    Kind kind;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::variable: return x;
            case Kind::negate: return -lhs->eval(x);
            case Kind::unary_fn: return fn(lhs->eval(x));
            case Kind::add: return lhs->eval(x) + rhs->eval(x);
            case Kind::sub: return lhs->eval(x) - rhs->eval(x);
            case Kind::mul: return lhs->eval(x) * rhs->eval(x);
            case Kind::div: return lhs->eval(x) / rhs->eval(x);
            case Kind::pow: return std::pow(lhs->eval(x), rhs->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    // Subtrees that may throw are built into locals before the node braces:
    // a parse error halfway through an aggregate argument must not strand the
    // members constructed so far (g++ 11 fails to run their destructors).
    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+')) {
                NodePtr rhs = term();
                lhs = make({Node::Kind::add, 0, nullptr, std::move(lhs), std::move(rhs)});
            } else if (eat('-')) {
                NodePtr rhs = term();
                lhs = make({Node::Kind::sub, 0, nullptr, std::move(lhs), std::move(rhs)});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*')) {
                NodePtr rhs = unary();
                lhs = make({Node::Kind::mul, 0, nullptr, std::move(lhs), std::move(rhs)});
            } else if (eat('/')) {
                NodePtr rhs = unary();
                lhs = make({Node::Kind::div, 0, nullptr, std::move(lhs), std::move(rhs)});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (eat('-')) {
            NodePtr inner = unary();
            return make({Node::Kind::negate, 0, nullptr, std::move(inner), nullptr});
        }
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) {
            NodePtr exponent = unary();
            return make({Node::Kind::pow, 0, nullptr, std::move(base), std::move(exponent)});
        }
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return make({Node::Kind::number, v, nullptr, nullptr, nullptr});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make({Node::Kind::variable, 0, nullptr, nullptr, nullptr});

        double (*fn)(double) = nullptr;
        if (name == "cos")
            fn = [](double v) { return std::cos(v); };
        else if (name == "sin")
            fn = [](double v) { return std::sin(v); };
        else if (name == "exp")
            fn = [](double v) { return std::exp(v); };
        else if (name == "log")
            fn = [](double v) { return std::log(v); };
        else if (name == "sqrt")
            fn = [](double v) { return std::sqrt(v); };
        else
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
        NodePtr arg = expr();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return make({Node::Kind::unary_fn, 0, fn, std::move(arg), nullptr});
    }
};

}  // namespace

Expression Expression::parse(std::string_view source) {
    Parser p(source);
    Expression e;
    e.root_ = p.run();
    e.source_ = std::string(source);
    return e;
}

double Expression::operator()(double x) const {
    if (!root_) throw std::logic_error("Expression: evaluating an empty expression");
    return root_->eval(x);
}

}  // namespace ratit::expr
