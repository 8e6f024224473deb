#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>

#include "flowtopo/geometry.hpp"

namespace flowtopo::expr {

/// Error raised by the tokenizer/parser, carrying the source position and
/// the offending token text.
class parse_error : public std::runtime_error {
  public:
    parse_error(std::string message, int line, int column, std::string token);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& token() const { return token_; }

  private:
    int line_;
    int column_;
    std::string token_;
};

struct EvalContext {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    const std::map<std::string, double>* params = nullptr;
    // constant-only contexts (parameter definitions) reject x, y, z
    bool allow_state = true;

    double lookup(const std::string& name) const;
};

class Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression tree node. Differentiation is exact and symbolic;
/// only trivial constant folding is applied while building trees.
class Node {
  public:
    virtual ~Node() = default;
    virtual double eval(const EvalContext& ctx) const = 0;
    virtual NodePtr derivative(const std::string& var) const = 0;
    virtual std::string str() const = 0;
    virtual bool is_constant(double* value) const { (void)value; return false; }
};

NodePtr constant(double v);
NodePtr variable(const std::string& name);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow_int(NodePtr a, int n);

/// Parses a single expression. `source` must contain exactly one expression.
NodePtr parse_expression(const std::string& source);

/// A vector field defined by three parsed component expressions over the
/// variables x, y, z plus named parameters. The nine first derivatives are
/// produced symbolically when the definition is built, so Jacobians are
/// exact up to rounding in evaluation.
class FieldDef {
  public:
    FieldDef(NodePtr fx, NodePtr fy, NodePtr fz, std::map<std::string, double> params);

    State eval(const State& s) const;
    std::array<std::array<double, 3>, 3> jacobian(const State& s) const;

    const std::map<std::string, double>& params() const { return params_; }
    std::string component_str(int i) const { return components_[i]->str(); }

  private:
    std::array<NodePtr, 3> components_;
    std::array<std::array<NodePtr, 3>, 3> derivatives_;
    std::map<std::string, double> params_;
};

/// Parses a field file: lines of the form `name = expression`, `#` comments
/// and blank lines. The names xdot, ydot, zdot define the field components;
/// every other assignment defines a numeric parameter and must be constant
/// given the parameters defined before it.
FieldDef parse_field_file(const std::string& source);

}  // namespace flowtopo::expr
