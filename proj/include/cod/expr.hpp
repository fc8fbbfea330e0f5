#pragma once

// Small real-valued expression language for command-line inputs:
//   numbers, pi, e, named variables, + - * / ^, unary minus, sin cos exp.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cod::expr {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

struct Node;

class Expression {
public:
    /// Parses `source`; only names listed in `variables` are accepted as variables.
    static Expression parse(const std::string& source, std::vector<std::string> variables);

    /// Values are bound positionally in the order the variables were declared.
    double operator()(std::initializer_list<double> values) const;
    double operator()(double v) const { return (*this)({v}); }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::vector<std::string> variables_;
    std::shared_ptr<const Node> root_;
};

} // namespace cod::expr
