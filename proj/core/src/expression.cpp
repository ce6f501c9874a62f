#include "besovlab/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "besovlab/error.hpp"

namespace besovlab {

struct Expression::Node {
    enum class Kind { kConst, kVar, kNeg, kBinary, kCall };
    Kind kind = Kind::kConst;
    double value = 0.0;
    int var = 0;  // 0 x, 1 y, 2 t
    char op = 0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(const double* vars) const {
        switch (kind) {
            case Kind::kConst: return value;
            case Kind::kVar: return vars[var];
            case Kind::kNeg: return -args[0]->eval(vars);
            case Kind::kBinary: {
                const double a = args[0]->eval(vars);
                const double b = args[1]->eval(vars);
                switch (op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/': return a / b;
                    default: return std::pow(a, b);
                }
            }
            case Kind::kCall: {
                const double a = args[0]->eval(vars);
                if (fn == "sin") return std::sin(a);
                if (fn == "cos") return std::cos(a);
                if (fn == "tan") return std::tan(a);
                if (fn == "exp") return std::exp(a);
                if (fn == "log") return std::log(a);
                if (fn == "sqrt") return std::sqrt(a);
                if (fn == "abs") return std::abs(a);
                if (fn == "tanh") return std::tanh(a);
                const double b = args[1]->eval(vars);
                if (fn == "min") return std::min(a, b);
                if (fn == "max") return std::max(a, b);
                return std::pow(a, b);
            }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse_all() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error("bad-params", "expression '" + std::string(s_) + "': " + what + " at offset " +
                                      std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(char op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Expression::Node::Kind::kBinary;
        n->op = op;
        n->args = {std::move(a), std::move(b)};
        return n;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (eat('+')) {
                n = binary('+', n, term());
            } else if (eat('-')) {
                n = binary('-', n, term());
            } else {
                return n;
            }
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (eat('*')) {
                n = binary('*', n, unary());
            } else if (eat('/')) {
                n = binary('/', n, unary());
            } else {
                return n;
            }
        }
    }

    NodePtr unary() {
        if (eat('-')) {
            auto n = std::make_shared<Expression::Node>();
            n->kind = Expression::Node::Kind::kNeg;
            n->args = {unary()};
            return n;
        }
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return binary('^', base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (eat('(')) {
            NodePtr n = expr();
            if (!eat(')')) fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(rest, &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            auto n = std::make_shared<Expression::Node>();
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id(s_.substr(b, pos_ - b));
            auto n = std::make_shared<Expression::Node>();
            if (id == "x" || id == "y" || id == "t") {
                n->kind = Expression::Node::Kind::kVar;
                n->var = id == "x" ? 0 : (id == "y" ? 1 : 2);
                return n;
            }
            if (id == "pi") {
                n->value = std::numbers::pi;
                return n;
            }
            if (id == "e") {
                n->value = std::numbers::e;
                return n;
            }
            static const std::vector<std::string> unary_fns{"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "tanh"};
            static const std::vector<std::string> binary_fns{"min", "max", "pow"};
            const bool is_unary = std::find(unary_fns.begin(), unary_fns.end(), id) != unary_fns.end();
            const bool is_binary = std::find(binary_fns.begin(), binary_fns.end(), id) != binary_fns.end();
            if (!is_unary && !is_binary) fail("unknown identifier '" + id + "'");
            if (!eat('(')) fail("expected '(' after " + id);
            n->kind = Expression::Node::Kind::kCall;
            n->fn = id;
            n->args.push_back(expr());
            if (is_binary) {
                if (!eat(',')) fail("expected ',' in " + id);
                n->args.push_back(expr());
            }
            if (!eat(')')) fail("missing ')' after " + id + " arguments");
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse_all();
    e.text_ = std::string(text);
    return e;
}

double Expression::operator()(double x, double y, double t) const {
    const double vars[3] = {x, y, t};
    return root_ ? root_->eval(vars) : 0.0;
}

}  // namespace besovlab
