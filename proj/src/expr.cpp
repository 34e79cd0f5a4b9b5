#include "psh/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "psh/errors.hpp"

namespace psh {

using cplx = std::complex<double>;

struct Expr::Node {
    enum Kind { Const, VarZ, VarX, VarY, VarQ, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    cplx value{};
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

NodeP make(Expr::Node::Kind k, std::vector<NodeP> args = {}, cplx v = {}, std::string fn = {}) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->args = std::move(args);
    n->value = v;
    n->fn = std::move(fn);
    return n;
}

cplx power(cplx a, cplx b) {
    if (b.imag() == 0.0) {
        double e = b.real();
        if (e == std::round(e) && std::abs(e) <= 64.0) {
            int n = static_cast<int>(e);
            cplx r = 1.0, base = n < 0 ? 1.0 / a : a;
            for (int k = std::abs(n); k > 0; k >>= 1) {
                if (k & 1) r *= base;
                base *= base;
            }
            return r;
        }
        if (a.imag() == 0.0 && a.real() > 0.0) return std::pow(a.real(), e);
        return std::pow(a, e);
    }
    return std::pow(a, b);
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodeP parse() {
        NodeP n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }
    bool uses_q = false;

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression '" + std::string(s_) + "': " + msg + " at position " + std::to_string(pos_));
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
    // "2q", "2 pi", "3(z+1)": a name or parenthesis right after an operand multiplies
    bool juxtaposed() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == '(' || std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    NodeP expr() {
        NodeP l = term();
        while (true) {
            if (eat('+'))
                l = make(Expr::Node::Add, {l, term()});
            else if (eat('-'))
                l = make(Expr::Node::Sub, {l, term()});
            else
                return l;
        }
    }
    NodeP term() {
        NodeP l = unary();
        while (true) {
            if (eat('*'))
                l = make(Expr::Node::Mul, {l, unary()});
            else if (eat('/'))
                l = make(Expr::Node::Div, {l, unary()});
            else if (juxtaposed())
                l = make(Expr::Node::Mul, {l, power_()});
            else
                return l;
        }
    }
    NodeP unary() {
        if (eat('-')) return make(Expr::Node::Neg, {unary()});
        if (eat('+')) return unary();
        return power_();
    }
    NodeP power_() {
        NodeP b = primary();
        if (eat('^')) return make(Expr::Node::Pow, {b, unary()});
        return b;
    }
    NodeP primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodeP n = expr();
            if (!eat(')')) fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string tmp(s_.substr(pos_));
            char* end = nullptr;
            double v = std::strtod(tmp.c_str(), &end);
            if (end == tmp.c_str()) fail("bad number");
            pos_ += static_cast<std::size_t>(end - tmp.c_str());
            if (pos_ < s_.size() && s_[pos_] == 'i' &&
                !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
                ++pos_;
                return make(Expr::Node::Const, {}, cplx(0.0, v));
            }
            return make(Expr::Node::Const, {}, cplx(v, 0.0));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string id(s_.substr(st, pos_ - st));
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                ++pos_;
                std::vector<NodeP> args;
                if (!eat(')')) {
                    do args.push_back(expr());
                    while (eat(','));
                    if (!eat(')')) fail("missing ')' after arguments of " + id);
                }
                static const std::vector<std::pair<std::string, std::size_t>> known = {
                    {"re", 1}, {"im", 1}, {"abs", 1}, {"arg", 1},  {"conj", 1}, {"sqrt", 1},
                    {"log", 1}, {"exp", 1}, {"cos", 1}, {"sin", 1}, {"pow", 2}};
                for (const auto& [name, arity] : known)
                    if (name == id) {
                        if (args.size() != arity) fail(id + " takes " + std::to_string(arity) + " argument(s)");
                        return make(Expr::Node::Call, std::move(args), {}, id);
                    }
                fail("unknown function " + id);
            }
            if (id == "z") return make(Expr::Node::VarZ);
            if (id == "x") return make(Expr::Node::VarX);
            if (id == "y") return make(Expr::Node::VarY);
            if (id == "q") {
                uses_q = true;
                return make(Expr::Node::VarQ);
            }
            if (id == "i") return make(Expr::Node::Const, {}, cplx(0.0, 1.0));
            if (id == "pi") return make(Expr::Node::Const, {}, cplx(M_PI, 0.0));
            fail("unknown identifier " + id);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

cplx eval(const Expr::Node& n, const ExprVars& v) {
    using K = Expr::Node;
    switch (n.kind) {
        case K::Const: return n.value;
        case K::VarZ: return v.z;
        case K::VarX: return v.z.real();
        case K::VarY: return v.z.imag();
        case K::VarQ: return v.q;
        case K::Neg: return -eval(*n.args[0], v);
        case K::Add: return eval(*n.args[0], v) + eval(*n.args[1], v);
        case K::Sub: return eval(*n.args[0], v) - eval(*n.args[1], v);
        case K::Mul: return eval(*n.args[0], v) * eval(*n.args[1], v);
        case K::Div: return eval(*n.args[0], v) / eval(*n.args[1], v);
        case K::Pow: return power(eval(*n.args[0], v), eval(*n.args[1], v));
        case K::Call: break;
    }
    cplx a = eval(*n.args[0], v);
    const std::string& f = n.fn;
    if (f == "re") return a.real();
    if (f == "im") return a.imag();
    if (f == "abs") return std::abs(a);
    if (f == "arg") return std::arg(a);
    if (f == "conj") return std::conj(a);
    if (f == "sqrt") return std::sqrt(a);
    if (f == "log") return std::log(a);
    if (f == "exp") return std::exp(a);
    if (f == "cos") return std::cos(a);
    if (f == "sin") return std::sin(a);
    return power(a, eval(*n.args[1], v));
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    Parser p(text);
    Expr e;
    e.root_ = p.parse();
    e.text_ = std::string(text);
    e.uses_q_ = p.uses_q;
    return e;
}

cplx Expr::operator()(const ExprVars& v) const { return eval(*root_, v); }

namespace {

bool has_variables(const Expr::Node& n) {
    if (n.kind == Expr::Node::VarZ || n.kind == Expr::Node::VarX || n.kind == Expr::Node::VarY ||
        n.kind == Expr::Node::VarQ)
        return true;
    for (const auto& a : n.args)
        if (has_variables(*a)) return true;
    return false;
}

}  // namespace

bool Expr::is_constant() const { return !has_variables(*root_); }

cplx parse_complex(std::string_view text) {
    Expr e = Expr::parse(text);
    if (!e.is_constant()) throw ParseError("expected a constant: " + std::string(text));
    return e(ExprVars{});
}

double parse_real(std::string_view text) {
    cplx v = parse_complex(text);
    if (v.imag() != 0.0) throw ParseError("expected a real value: " + std::string(text));
    return v.real();
}

}  // namespace psh
