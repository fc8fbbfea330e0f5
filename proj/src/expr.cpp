#include "cod/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace cod::expr {

struct Node {
    enum class Kind { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp };
    Kind kind;
    double value = 0.0;
    std::size_t slot = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    return std::make_shared<const Node>(Node{kind, 0.0, 0, std::move(lhs), std::move(rhs)});
}

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    NodePtr parse() {
        NodePtr n = expression();
        skip_space();
        if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        return n;
    }

private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    NodePtr expression() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Node::Kind::add, n, term());
            else if (accept('-')) n = make(Node::Kind::sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Node::Kind::mul, n, unary());
            else if (accept('/')) n = make(Node::Kind::div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Node::Kind::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (accept('(')) {
            NodePtr n = expression();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    NodePtr number() {
        const char* begin = src_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = std::make_shared<Node>(Node{Node::Kind::constant, v, 0, nullptr, nullptr});
        return n;
    }

    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string id = src_.substr(start, pos_ - start);

        if (id == "sin" || id == "cos" || id == "exp") {
            expect('(');
            NodePtr arg = expression();
            expect(')');
            const auto kind = id == "sin" ? Node::Kind::sin : id == "cos" ? Node::Kind::cos : Node::Kind::exp;
            return make(kind, arg);
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == id) return std::make_shared<Node>(Node{Node::Kind::variable, 0.0, i, nullptr, nullptr});
        }
        if (id == "pi") return std::make_shared<Node>(Node{Node::Kind::constant, std::numbers::pi, 0, nullptr, nullptr});
        if (id == "e") return std::make_shared<Node>(Node{Node::Kind::constant, std::numbers::e, 0, nullptr, nullptr});
        throw ParseError("unknown name '" + id + "'", start);
    }

    const std::string& src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

double evaluate(const Node& n, const double* vars) {
    switch (n.kind) {
        case Node::Kind::constant: return n.value;
        case Node::Kind::variable: return vars[n.slot];
        case Node::Kind::add: return evaluate(*n.lhs, vars) + evaluate(*n.rhs, vars);
        case Node::Kind::sub: return evaluate(*n.lhs, vars) - evaluate(*n.rhs, vars);
        case Node::Kind::mul: return evaluate(*n.lhs, vars) * evaluate(*n.rhs, vars);
        case Node::Kind::div: return evaluate(*n.lhs, vars) / evaluate(*n.rhs, vars);
        case Node::Kind::pow: return std::pow(evaluate(*n.lhs, vars), evaluate(*n.rhs, vars));
        case Node::Kind::neg: return -evaluate(*n.lhs, vars);
        case Node::Kind::sin: return std::sin(evaluate(*n.lhs, vars));
        case Node::Kind::cos: return std::cos(evaluate(*n.lhs, vars));
        case Node::Kind::exp: return std::exp(evaluate(*n.lhs, vars));
    }
    return 0.0;
}

} // namespace

Expression Expression::parse(const std::string& source, std::vector<std::string> variables) {
    Expression e;
    e.source_ = source;
    e.variables_ = std::move(variables);
    e.root_ = Parser(e.source_, e.variables_).parse();
    return e;
}

double Expression::operator()(std::initializer_list<double> values) const {
    if (values.size() != variables_.size()) throw std::invalid_argument("expression: wrong number of variable values");
    return evaluate(*root_, values.begin());
}

} // namespace cod::expr
