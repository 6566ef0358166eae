#include "vst/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace vst {

struct Expr::Node {
    enum class Op : unsigned char {
        num, var1, var2, neg,
        add, sub, mul, div, pow,
        fsin, fcos, fexp, flog, fabs, fsqrt, fmin, fmax
    };
    Op op;
    double value = 0.0;  // op == num only
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using Op = Node::Op;
using P = std::shared_ptr<const Node>;

P make_num(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::num;
    n->value = v;
    return n;
}

P make_node(Op op, P a, P b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct FuncInfo {
    const char* name;
    Op op;
    int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Op::fsin, 1},  {"cos", Op::fcos, 1}, {"exp", Op::fexp, 1},
    {"log", Op::flog, 1},  {"abs", Op::fabs, 1}, {"sqrt", Op::fsqrt, 1},
    {"min", Op::fmin, 2},  {"max", Op::fmax, 2},
};

// Recursive-descent parser over the raw bytes.  Grammar, loosest first:
//   sum     := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' factor)?          (right associative)
//   atom    := number | ident | ident '(' args ')' | '(' sum ')'
// Unary minus binds looser than '^', so -x^2 is -(x^2).
class Parser {
public:
    Parser(std::string_view text, std::string_view v1, std::string_view v2)
        : text_(text), var1_(v1), var2_(v2) {}

    P run() {
        P e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input", pos_);
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::size_t off) const {
        throw ParseError(what + " at offset " + std::to_string(off), off);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    P parse_sum() {
        P e = parse_term();
        for (;;) {
            if (eat('+')) e = make_node(Op::add, e, parse_term());
            else if (eat('-')) e = make_node(Op::sub, e, parse_term());
            else return e;
        }
    }

    P parse_term() {
        P e = parse_factor();
        for (;;) {
            if (eat('*')) e = make_node(Op::mul, e, parse_factor());
            else if (eat('/')) e = make_node(Op::div, e, parse_factor());
            else return e;
        }
    }

    P parse_factor() {
        if (eat('-')) return make_node(Op::neg, parse_factor());
        return parse_power();
    }

    P parse_power() {
        P base = parse_atom();
        if (eat('^')) return make_node(Op::pow, base, parse_factor());
        return base;
    }

    P parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input", pos_);
        char c = text_[pos_];

        if (c == '(') {
            std::size_t open = pos_++;
            P e = parse_sum();
            if (!eat(')')) fail("missing ')' for '(' ", open);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    P parse_number() {
        // strtod accepts more than we want (hex, inf, nan, signs), but we
        // only enter here on a digit or '.', which rules those out except
        // hex; reject a "0x" prefix explicitly.
        if (pos_ + 1 < text_.size() && text_[pos_] == '0' &&
            (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X'))
            fail("malformed number", pos_);
        buf_.assign(text_.substr(pos_));
        const char* begin = buf_.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return make_num(v);
    }

    P parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        if (peek() == '(') return parse_call(name, start);

        if (name == var1_) return make_node(Op::var1, nullptr);
        if (!var2_.empty() && name == var2_) return make_node(Op::var2, nullptr);
        if (name == "pi") return make_num(std::numbers::pi_v<double>);
        if (name == "e") return make_num(std::numbers::e_v<double>);
        fail("unknown identifier '" + std::string(name) + "'", start);
    }

    P parse_call(std::string_view name, std::size_t start) {
        const FuncInfo* info = nullptr;
        for (const auto& f : kFuncs)
            if (name == f.name) { info = &f; break; }
        if (!info) fail("unknown function '" + std::string(name) + "'", start);

        eat('(');
        std::vector<P> args;
        if (peek() != ')') {
            args.push_back(parse_sum());
            while (eat(',')) args.push_back(parse_sum());
        }
        if (!eat(')')) fail("missing ')' in call to '" + std::string(name) + "'", start);
        if (static_cast<int>(args.size()) != info->arity)
            fail("function '" + std::string(name) + "' expects " +
                     std::to_string(info->arity) + " argument(s), got " +
                     std::to_string(args.size()),
                 start);
        if (info->arity == 1) return make_node(info->op, args[0]);
        return make_node(info->op, args[0], args[1]);
    }

    std::string_view text_;
    std::string_view var1_, var2_;
    std::string buf_;
    std::size_t pos_ = 0;
};

double eval_node(const Node* n, double x, const std::optional<double>& y) {
    switch (n->op) {
        case Op::num: return n->value;
        case Op::var1: return x;
        case Op::var2:
            if (!y) throw EvalError("formula references the dependent variable but no value was supplied");
            return *y;
        case Op::neg: return -eval_node(n->a.get(), x, y);
        default: break;
    }
    double a = eval_node(n->a.get(), x, y);
    double b = n->b ? eval_node(n->b.get(), x, y) : 0.0;
    double r;
    switch (n->op) {
        case Op::add: r = a + b; break;
        case Op::sub: r = a - b; break;
        case Op::mul: r = a * b; break;
        case Op::div:
            if (b == 0.0) throw EvalError("division by zero");
            r = a / b;
            break;
        case Op::pow: r = std::pow(a, b); break;
        case Op::fsin: r = std::sin(a); break;
        case Op::fcos: r = std::cos(a); break;
        case Op::fexp: r = std::exp(a); break;
        case Op::flog:
            if (a <= 0.0) throw EvalError("log of a non-positive value");
            r = std::log(a);
            break;
        case Op::fabs: r = std::fabs(a); break;
        case Op::fsqrt:
            if (a < 0.0) throw EvalError("sqrt of a negative value");
            r = std::sqrt(a);
            break;
        case Op::fmin: r = std::fmin(a, b); break;
        case Op::fmax: r = std::fmax(a, b); break;
        default: throw EvalError("corrupt expression tree");
    }
    if (!std::isfinite(r)) throw EvalError("evaluation produced a non-finite value");
    return r;
}

bool node_uses_var2(const Node* n) {
    if (!n) return false;
    if (n->op == Op::var2) return true;
    return node_uses_var2(n->a.get()) || node_uses_var2(n->b.get());
}

// Printing precedence levels; higher binds tighter.
int prec_of(Op op) {
    switch (op) {
        case Op::add: case Op::sub: return 1;
        case Op::mul: case Op::div: return 2;
        case Op::neg: return 3;
        case Op::pow: return 4;
        default: return 5;
    }
}

void print_node(const Node* n, std::string& out, const std::string& v1,
                const std::string& v2);

void print_child(const Node* c, std::string& out, int parent_prec, bool tie_parens,
                 const std::string& v1, const std::string& v2) {
    int p = prec_of(c->op);
    bool parens = p < parent_prec || (tie_parens && p == parent_prec);
    if (parens) out += '(';
    print_node(c, out, v1, v2);
    if (parens) out += ')';
}

void print_node(const Node* n, std::string& out, const std::string& v1,
                const std::string& v2) {
    switch (n->op) {
        case Op::num: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            out += buf;
            return;
        }
        case Op::var1: out += v1; return;
        case Op::var2: out += v2; return;
        case Op::neg:
            out += '-';
            // The operand of unary minus may not start with another '-';
            // parenthesise nested negations so "--x" never gets emitted.
            print_child(n->a.get(), out, prec_of(Op::neg),
                        n->a->op == Op::neg, v1, v2);
            return;
        case Op::add: case Op::sub: case Op::mul: case Op::div: {
            char sym = n->op == Op::add ? '+' : n->op == Op::sub ? '-'
                     : n->op == Op::mul ? '*' : '/';
            int p = prec_of(n->op);
            print_child(n->a.get(), out, p, false, v1, v2);
            out += sym;
            // '-' and '/' are left associative: a-(b-c) != a-b-c.
            bool tie = n->op == Op::sub || n->op == Op::div;
            print_child(n->b.get(), out, p, tie, v1, v2);
            return;
        }
        case Op::pow:
            // Right associative: parenthesise a left child of equal level.
            print_child(n->a.get(), out, prec_of(Op::pow), true, v1, v2);
            out += '^';
            print_child(n->b.get(), out, prec_of(Op::pow), false, v1, v2);
            return;
        default: {
            const char* name = "?";
            for (const auto& f : kFuncs)
                if (f.op == n->op) { name = f.name; break; }
            out += name;
            out += '(';
            print_node(n->a.get(), out, v1, v2);
            if (n->b) {
                out += ", ";
                print_node(n->b.get(), out, v1, v2);
            }
            out += ')';
            return;
        }
    }
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root, std::string source, std::string v1,
           std::string v2)
    : root_(std::move(root)),
      source_(std::move(source)),
      var1_(std::move(v1)),
      var2_(std::move(v2)) {}

Expr Expr::parse(std::string_view text) { return parse(text, "x", "y"); }

Expr Expr::parse(std::string_view text, std::string_view first_var,
                 std::string_view second_var) {
    Parser p(text, first_var, second_var);
    return Expr(p.run(), std::string(text), std::string(first_var),
                std::string(second_var));
}

double Expr::eval_impl(double x, std::optional<double> y) const {
    return eval_node(root_.get(), x, y);
}

bool Expr::uses_second_var() const { return node_uses_var2(root_.get()); }

std::string Expr::str() const {
    std::string out;
    print_node(root_.get(), out, var1_, var2_);
    return out;
}

double eval_expr(const Expr& e, double x, std::optional<double> y) {
    return y ? e.eval(x, *y) : e.eval(x);
}

}  // namespace vst
