#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

namespace psh {

/// Values bound to the variables of an expression: z (with x = re z, y = im z) and q.
struct ExprVars {
    std::complex<double> z{0.0, 0.0};
    double q = 0.0;
};

/// Compiled arithmetic expression over complex numbers.
/// Grammar: + - * / ^, unary minus, parentheses, juxtaposition as product (2q, 3(z+1)), literals like 2.5, 1e-3, 0.5i,
/// constants i and pi, variables z x y q, and the functions
/// re im abs arg conj sqrt log exp cos sin pow.
class Expr {
public:
    static Expr parse(std::string_view text);
    std::complex<double> operator()(const ExprVars& v) const;
    std::complex<double> operator()(std::complex<double> z, double q = 0.0) const { return (*this)({z, q}); }
    const std::string& text() const { return text_; }
    bool uses_q() const { return uses_q_; }
    /// True when no variable (z, x, y, q) appears.
    bool is_constant() const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    bool uses_q_ = false;
};

/// Parses a constant expression (no variables), e.g. "pi/2" or "0.3+0.1i".
std::complex<double> parse_complex(std::string_view text);
double parse_real(std::string_view text);

}  // namespace psh
