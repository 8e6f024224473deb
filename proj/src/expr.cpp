#include "flowtopo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace flowtopo::expr {

namespace {

std::string position_message(const std::string& message, int line, int column,
                             const std::string& token) {
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << column << ": " << message;
    if (!token.empty()) os << " (near '" << token << "')";
    return os.str();
}

}  // namespace

parse_error::parse_error(std::string message, int line, int column, std::string token)
    : std::runtime_error(position_message(message, line, column, token)),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

double EvalContext::lookup(const std::string& name) const {
    if (allow_state) {
        if (name == "x") return x;
        if (name == "y") return y;
        if (name == "z") return z;
    }
    if (params != nullptr) {
        auto it = params->find(name);
        if (it != params->end()) return it->second;
    }
    throw std::domain_error("unbound identifier in field expression: " + name);
}

namespace {

class ConstNode final : public Node {
  public:
    explicit ConstNode(double v) : value_(v) {}
    double eval(const EvalContext&) const override { return value_; }
    NodePtr derivative(const std::string&) const override { return constant(0.0); }
    std::string str() const override {
        std::ostringstream os;
        os << value_;
        return os.str();
    }
    bool is_constant(double* value) const override {
        if (value) *value = value_;
        return true;
    }

  private:
    double value_;
};

class VarNode final : public Node {
  public:
    explicit VarNode(std::string name) : name_(std::move(name)) {}
    double eval(const EvalContext& ctx) const override { return ctx.lookup(name_); }
    NodePtr derivative(const std::string& var) const override {
        return constant(var == name_ ? 1.0 : 0.0);
    }
    std::string str() const override { return name_; }

  private:
    std::string name_;
};

class BinaryNode : public Node {
  public:
    BinaryNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}

  protected:
    NodePtr a_;
    NodePtr b_;
};

class AddNode final : public BinaryNode {
  public:
    using BinaryNode::BinaryNode;
    double eval(const EvalContext& ctx) const override { return a_->eval(ctx) + b_->eval(ctx); }
    NodePtr derivative(const std::string& v) const override {
        return add(a_->derivative(v), b_->derivative(v));
    }
    std::string str() const override { return "(" + a_->str() + " + " + b_->str() + ")"; }
};

class SubNode final : public BinaryNode {
  public:
    using BinaryNode::BinaryNode;
    double eval(const EvalContext& ctx) const override { return a_->eval(ctx) - b_->eval(ctx); }
    NodePtr derivative(const std::string& v) const override {
        return sub(a_->derivative(v), b_->derivative(v));
    }
    std::string str() const override { return "(" + a_->str() + " - " + b_->str() + ")"; }
};

class MulNode final : public BinaryNode {
  public:
    using BinaryNode::BinaryNode;
    double eval(const EvalContext& ctx) const override { return a_->eval(ctx) * b_->eval(ctx); }
    NodePtr derivative(const std::string& v) const override {
        return add(mul(a_->derivative(v), b_), mul(a_, b_->derivative(v)));
    }
    std::string str() const override { return "(" + a_->str() + " * " + b_->str() + ")"; }
};

class DivNode final : public BinaryNode {
  public:
    using BinaryNode::BinaryNode;
    double eval(const EvalContext& ctx) const override { return a_->eval(ctx) / b_->eval(ctx); }
    NodePtr derivative(const std::string& v) const override {
        // (a/b)' = a'/b - a b'/b^2
        return sub(div(a_->derivative(v), b_), div(mul(a_, b_->derivative(v)), mul(b_, b_)));
    }
    std::string str() const override { return "(" + a_->str() + " / " + b_->str() + ")"; }
};

class NegNode final : public Node {
  public:
    explicit NegNode(NodePtr a) : a_(std::move(a)) {}
    double eval(const EvalContext& ctx) const override { return -a_->eval(ctx); }
    NodePtr derivative(const std::string& v) const override { return neg(a_->derivative(v)); }
    std::string str() const override { return "(-" + a_->str() + ")"; }

  private:
    NodePtr a_;
};

class PowNode final : public Node {
  public:
    PowNode(NodePtr a, int n) : a_(std::move(a)), n_(n) {}
    double eval(const EvalContext& ctx) const override {
        double base = a_->eval(ctx);
        double out = 1.0;
        for (int i = 0; i < n_; ++i) out *= base;
        return out;
    }
    NodePtr derivative(const std::string& v) const override {
        if (n_ == 0) return constant(0.0);
        return mul(mul(constant(static_cast<double>(n_)), pow_int(a_, n_ - 1)),
                   a_->derivative(v));
    }
    std::string str() const override {
        std::ostringstream os;
        os << a_->str() << "^" << n_;
        return os.str();
    }

  private:
    NodePtr a_;
    int n_;
};

bool const_value(const NodePtr& n, double* v) { return n->is_constant(v); }

}  // namespace

NodePtr constant(double v) { return std::make_shared<ConstNode>(v); }
NodePtr variable(const std::string& name) { return std::make_shared<VarNode>(name); }

NodePtr add(NodePtr a, NodePtr b) {
    double ca, cb;
    bool ka = const_value(a, &ca), kb = const_value(b, &cb);
    if (ka && kb) return constant(ca + cb);
    if (ka && ca == 0.0) return b;
    if (kb && cb == 0.0) return a;
    return std::make_shared<AddNode>(std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
    double ca, cb;
    bool ka = const_value(a, &ca), kb = const_value(b, &cb);
    if (ka && kb) return constant(ca - cb);
    if (kb && cb == 0.0) return a;
    if (ka && ca == 0.0) return neg(std::move(b));
    return std::make_shared<SubNode>(std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
    double ca, cb;
    bool ka = const_value(a, &ca), kb = const_value(b, &cb);
    if (ka && kb) return constant(ca * cb);
    if ((ka && ca == 0.0) || (kb && cb == 0.0)) return constant(0.0);
    if (ka && ca == 1.0) return b;
    if (kb && cb == 1.0) return a;
    return std::make_shared<MulNode>(std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
    double ca, cb;
    bool ka = const_value(a, &ca), kb = const_value(b, &cb);
    if (kb && cb != 0.0) {
        if (ka) return constant(ca / cb);
        if (cb == 1.0) return a;
    }
    if (ka && ca == 0.0) return constant(0.0);
    return std::make_shared<DivNode>(std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
    double ca;
    if (const_value(a, &ca)) return constant(-ca);
    return std::make_shared<NegNode>(std::move(a));
}

NodePtr pow_int(NodePtr a, int n) {
    if (n == 0) return constant(1.0);
    if (n == 1) return a;
    double ca;
    if (const_value(a, &ca)) {
        double out = 1.0;
        for (int i = 0; i < n; ++i) out *= ca;
        return constant(out);
    }
    return std::make_shared<PowNode>(std::move(a), n);
}

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Assign, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    double number = 0.0;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    Lexer(const std::string& src, int line0) : src_(src), line_(line0) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = TokKind::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
        advance();
        t.text = std::string(1, c);
        switch (c) {
            case '+': t.kind = TokKind::Plus; return t;
            case '-': t.kind = TokKind::Minus; return t;
            case '*': t.kind = TokKind::Star; return t;
            case '/': t.kind = TokKind::Slash; return t;
            case '^': t.kind = TokKind::Caret; return t;
            case '(': t.kind = TokKind::LParen; return t;
            case ')': t.kind = TokKind::RParen; return t;
            case '=': t.kind = TokKind::Assign; return t;
            default:
                throw parse_error("unexpected character", t.line, t.col, t.text);
        }
    }

  private:
    void advance() {
        ++pos_;
        ++col_;
    }

    void skip_space() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '\n')
            advance();
    }

    Token lex_number() {
        Token t;
        t.line = line_;
        t.col = col_;
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t mark = pos_;
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
            } else {
                // not an exponent after all ('e' starts an identifier context)
                col_ -= static_cast<int>(pos_ - mark);
                pos_ = mark;
            }
        }
        t.text = src_.substr(start, pos_ - start);
        if (t.text == ".") throw parse_error("malformed number", t.line, t.col, t.text);
        char* end = nullptr;
        t.number = std::strtod(t.text.c_str(), &end);
        if (end != t.text.c_str() + t.text.size())
            throw parse_error("malformed number", t.line, t.col, t.text);
        t.kind = TokKind::Number;
        return t;
    }

    Token lex_ident() {
        Token t;
        t.line = line_;
        t.col = col_;
        size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            advance();
        t.text = src_.substr(start, pos_ - start);
        t.kind = TokKind::Ident;
        return t;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_;
    int col_ = 1;
};

class Parser {
  public:
    Parser(const std::string& src, int line0) : lexer_(src, line0) { cur_ = lexer_.next(); }

    NodePtr parse_full() {
        NodePtr e = parse_sum();
        expect(TokKind::End, "trailing input after expression");
        return e;
    }

  private:
    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        while (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
            TokKind op = cur_.kind;
            consume();
            NodePtr rhs = parse_product();
            lhs = (op == TokKind::Plus) ? add(lhs, rhs) : sub(lhs, rhs);
        }
        return lhs;
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        while (cur_.kind == TokKind::Star || cur_.kind == TokKind::Slash) {
            TokKind op = cur_.kind;
            consume();
            NodePtr rhs = parse_unary();
            lhs = (op == TokKind::Star) ? mul(lhs, rhs) : div(lhs, rhs);
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (cur_.kind == TokKind::Minus) {
            consume();
            return neg(parse_unary());
        }
        if (cur_.kind == TokKind::Plus) {
            consume();
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (cur_.kind == TokKind::Caret) {
            consume();
            if (cur_.kind != TokKind::Number)
                throw parse_error("exponent must be a nonnegative integer literal", cur_.line,
                                  cur_.col, cur_.text);
            double v = cur_.number;
            if (v < 0.0 || v != std::floor(v) || v > 1e6 ||
                cur_.text.find_first_of(".eE") != std::string::npos)
                throw parse_error("exponent must be a nonnegative integer literal", cur_.line,
                                  cur_.col, cur_.text);
            int n = static_cast<int>(v);
            consume();
            return pow_int(base, n);
        }
        return base;
    }

    NodePtr parse_atom() {
        if (cur_.kind == TokKind::Number) {
            NodePtr e = constant(cur_.number);
            consume();
            return e;
        }
        if (cur_.kind == TokKind::Ident) {
            NodePtr e = variable(cur_.text);
            consume();
            return e;
        }
        if (cur_.kind == TokKind::LParen) {
            consume();
            NodePtr e = parse_sum();
            expect(TokKind::RParen, "expected ')'");
            return e;
        }
        throw parse_error("expected a number, identifier or '('", cur_.line, cur_.col, cur_.text);
    }

    void consume() { cur_ = lexer_.next(); }

    void expect(TokKind kind, const char* message) {
        if (cur_.kind != kind)
            throw parse_error(message, cur_.line, cur_.col, cur_.text);
        if (kind != TokKind::End) consume();
    }

    Lexer lexer_;
    Token cur_;
};

}  // namespace

NodePtr parse_expression(const std::string& source) { return Parser(source, 1).parse_full(); }

FieldDef::FieldDef(NodePtr fx, NodePtr fy, NodePtr fz, std::map<std::string, double> params)
    : components_{std::move(fx), std::move(fy), std::move(fz)}, params_(std::move(params)) {
    static const std::string vars[3] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) derivatives_[i][j] = components_[i]->derivative(vars[j]);
}

State FieldDef::eval(const State& s) const {
    EvalContext ctx{s.x, s.y, s.z, &params_};
    return {components_[0]->eval(ctx), components_[1]->eval(ctx), components_[2]->eval(ctx)};
}

std::array<std::array<double, 3>, 3> FieldDef::jacobian(const State& s) const {
    EvalContext ctx{s.x, s.y, s.z, &params_};
    std::array<std::array<double, 3>, 3> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = derivatives_[i][j]->eval(ctx);
    return out;
}

FieldDef parse_field_file(const std::string& source) {
    std::map<std::string, double> params;
    std::array<NodePtr, 3> comps;
    std::array<bool, 3> have{false, false, false};

    std::istringstream in(source);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        Lexer lex(line, lineno);
        Token name = lex.next();
        if (name.kind != TokKind::Ident)
            throw parse_error("expected 'name = expression'", name.line, name.col, name.text);
        Token eq = lex.next();
        if (eq.kind != TokKind::Assign)
            throw parse_error("expected '=' after name", eq.line, eq.col, eq.text);
        auto eqpos = line.find('=');
        std::string rhs(line.size() - eqpos - 1, ' ');
        // keep column numbers aligned with the original line
        std::string padded(eqpos + 1, ' ');
        padded += line.substr(eqpos + 1);
        Parser parser(padded, lineno);
        NodePtr e = parser.parse_full();

        int slot = name.text == "xdot" ? 0 : name.text == "ydot" ? 1 : name.text == "zdot" ? 2 : -1;
        if (slot >= 0) {
            if (have[slot])
                throw parse_error("component defined twice", name.line, name.col, name.text);
            comps[slot] = e;
            have[slot] = true;
        } else {
            EvalContext ctx{0.0, 0.0, 0.0, &params, false};
            double v;
            try {
                v = e->eval(ctx);
            } catch (const std::domain_error&) {
                throw parse_error("parameter value must be constant", name.line, name.col,
                                  name.text);
            }
            params[name.text] = v;
        }
    }
    for (int i = 0; i < 3; ++i)
        if (!have[i])
            throw parse_error(std::string("missing component ") +
                                  (i == 0 ? "xdot" : i == 1 ? "ydot" : "zdot"),
                              lineno + 1, 1, "");
    return FieldDef(comps[0], comps[1], comps[2], std::move(params));
}

}  // namespace flowtopo::expr
