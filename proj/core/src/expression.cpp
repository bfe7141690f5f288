#include "gmfc/expression.hpp"

#include "gmfc/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace gmfc {

struct Expression::Node {
    enum class Kind { constant, var_u, var_v, neg, add, sub, mul, div, pow, call };
    Kind kind = Kind::constant;
    double value = 0.0;
    std::string function;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, double value = 0.0, std::string fn = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->args = std::move(args);
    n->value = value;
    n->function = std::move(fn);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse_all() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

    bool uses_v = false;

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression \"" + std::string(s_) + "\": " + msg + " at column " +
                         std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Kind::add, {lhs, term()});
            } else if (accept('-')) {
                lhs = make(Kind::sub, {lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Kind::mul, {lhs, unary()});
            } else if (accept('/')) {
                lhs = make(Kind::div, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::string rest(s_.substr(pos_));
        char* end = nullptr;
        const double value = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return make(Kind::constant, {}, value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        if (name == "u") return make(Kind::var_u);
        if (name == "v") {
            uses_v = true;
            return make(Kind::var_v);
        }
        if (name == "pi") return make(Kind::constant, {}, std::numbers::pi);
        if (name == "e") return make(Kind::constant, {}, std::numbers::e);

        static const std::vector<std::pair<std::string, std::size_t>> functions = {
            {"exp", 1}, {"log", 1}, {"sqrt", 1}, {"sin", 1}, {"cos", 1},
            {"tanh", 1}, {"abs", 1}, {"min", 2}, {"max", 2}, {"pow", 2}};
        for (const auto& [fname, arity] : functions) {
            if (fname != name) continue;
            if (!accept('(')) fail("expected '(' after " + name);
            std::vector<NodePtr> args;
            args.push_back(expr());
            while (accept(',')) args.push_back(expr());
            if (!accept(')')) fail("expected ')' after arguments of " + name);
            if (args.size() != arity) fail(name + " takes " + std::to_string(arity) + " argument(s)");
            return make(Kind::call, std::move(args), 0.0, name);
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double u, double v) {
    switch (n.kind) {
        case Kind::constant: return n.value;
        case Kind::var_u: return u;
        case Kind::var_v: return v;
        case Kind::neg: return -eval(*n.args[0], u, v);
        case Kind::add: return eval(*n.args[0], u, v) + eval(*n.args[1], u, v);
        case Kind::sub: return eval(*n.args[0], u, v) - eval(*n.args[1], u, v);
        case Kind::mul: return eval(*n.args[0], u, v) * eval(*n.args[1], u, v);
        case Kind::div: return eval(*n.args[0], u, v) / eval(*n.args[1], u, v);
        case Kind::pow: return std::pow(eval(*n.args[0], u, v), eval(*n.args[1], u, v));
        case Kind::call: {
            const double a = eval(*n.args[0], u, v);
            const std::string& f = n.function;
            if (f == "exp") return std::exp(a);
            if (f == "log") return std::log(a);
            if (f == "sqrt") return std::sqrt(a);
            if (f == "sin") return std::sin(a);
            if (f == "cos") return std::cos(a);
            if (f == "tanh") return std::tanh(a);
            if (f == "abs") return std::abs(a);
            const double b = eval(*n.args[1], u, v);
            if (f == "min") return std::min(a, b);
            if (f == "max") return std::max(a, b);
            return std::pow(a, b);
        }
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser parser(text);
    Expression e;
    e.root_ = parser.parse_all();
    e.text_ = std::string(text);
    e.uses_v_ = parser.uses_v;
    return e;
}

double Expression::operator()(double u, double v) const { return eval(*root_, u, v); }

}  // namespace gmfc
