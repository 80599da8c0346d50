#ifndef CMCFACE_EXPR_HPP
#define CMCFACE_EXPR_HPP

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmcface/errors.hpp"

namespace cmcface {

using cplx = std::complex<double>;

enum class NodeKind : unsigned char {
    Const, Var, Add, Sub, Mul, Div, Neg, Pow, IntPow, Exp, Log
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable node of a meromorphic-expression tree.  Pow carries a real
/// (possibly non-integer) exponent and is multivalued unless the exponent
/// is an integer; IntPow is always single-valued.
struct Node {
    NodeKind kind;
    cplx value{};        // Const
    double exponent = 0; // Pow
    long ipower = 0;     // IntPow
    NodePtr a, b;        // children (a unary, a+b binary)
};

/// Expression in one complex variable.  Construction goes through the
/// factory functions / operators below, which constant-fold and keep the
/// invariants (no division by the zero expression, integer-valued real
/// exponents become IntPow).
class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr r) : root_(std::move(r)) {}

    bool empty() const { return !root_; }
    const Node* root() const { return root_.get(); }
    NodePtr root_ptr() const { return root_; }

    /// Evaluate with principal branches for Pow/Log.
    cplx eval(cplx z) const;

    /// Value if the expression is a folded constant.
    std::optional<cplx> as_const() const;

    static Expr constant(cplx c);
    static Expr var();

private:
    NodePtr root_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow_expr(const Expr& base, double exponent);
Expr ipow_expr(const Expr& base, long n);
Expr exp_expr(const Expr& a);
Expr log_expr(const Expr& a);

inline Expr operator*(cplx c, const Expr& e) { return Expr::constant(c) * e; }
inline Expr operator*(const Expr& e, cplx c) { return Expr::constant(c) * e; }

/// Exact symbolic derivative d/dz.
Expr differentiate(const Expr& e);

/// Schwarzian derivative S(e) = (e''/e')' - (1/2)(e''/e')^2.
/// Throws ConstantExpression when e is constant.
Expr schwarzian(const Expr& e);

/// Replace the variable by another expression (memoized over shared nodes).
Expr substitute(const Expr& e, const Expr& replacement);

std::string to_string(const Expr& e);

/// Parse the expression grammar: operators + - * / ^, functions exp, log,
/// constants i, pi, e, the variable z, and named real parameters resolved
/// from `params`.  Exponents must fold to a real constant; a constant base
/// with a variable exponent c^f is rewritten as exp(f log c) for positive
/// real c.
Expr parse_expr(const std::string& text,
                const std::map<std::string, double>& params = {});

/// Sampling-based equality of meromorphic expressions at a fixed generic
/// point set: |a-b| <= tol * max(1,|a|,|b|) at every finite sample.
bool numerically_equal(const Expr& a, const Expr& b, double tol = 1e-9);
bool is_zero_numeric(const Expr& e, double tol = 1e-9);

/// A puncture of the domain: a finite point or the point at infinity.
struct Puncture {
    bool infinite = false;
    cplx z{};

    static Puncture at(cplx p) { return {false, p}; }
    static Puncture inf() { return {true, {}}; }

    bool operator==(const Puncture& o) const {
        return infinite == o.infinite && (infinite || z == o.z);
    }
};

std::string to_string(const Puncture& p);

/// Real order m with e(z) ~ c (z-p)^m as z -> p (at infinity: the order of
/// e(1/w) at w=0).  Exact when the local leading behavior is resolved by
/// constant folding and power collection, otherwise estimated by log-log
/// regression on shrinking circles.  Throws ZeroExpression for e == 0 and
/// InconsistentOrder when the regression slopes disagree (essential
/// singularities).
double order_at(const Expr& e, const Puncture& p, double sample_radius = 0.05);

/// Exact local order and leading coefficient at the origin, when the tree
/// resolves it symbolically.  Order +infinity encodes the zero expression.
std::optional<std::pair<double, cplx>> exact_order_coeff(const Expr& e);

struct Degree {
    bool infinite = false;
    long value = 0;

    static Degree inf() { return {true, 0}; }
    static Degree of(long v) { return {false, v}; }
    bool operator==(const Degree& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

/// max(deg P, deg Q) after normalizing to a coprime rational function
/// P/Q (approximate polynomial GCD, tolerance 1e-10); infinity when the
/// expression contains Exp/Log/non-integer Pow that cannot be eliminated.
Degree rational_degree(const Expr& e);

} // namespace cmcface

#endif // CMCFACE_EXPR_HPP
