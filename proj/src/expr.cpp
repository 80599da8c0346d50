#include "cmcface/expr.hpp"

#include <cmath>
#include <unordered_map>

namespace cmcface {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_const(const NodePtr& n, cplx* out = nullptr) {
    if (n && n->kind == NodeKind::Const) {
        if (out) *out = n->value;
        return true;
    }
    return false;
}

cplx ipow_eval(cplx base, long n) {
    if (n < 0) return cplx(1.0) / ipow_eval(base, -n);
    cplx acc(1.0), b = base;
    unsigned long e = static_cast<unsigned long>(n);
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

} // namespace

Expr Expr::constant(cplx c) {
    return Expr(make_node({NodeKind::Const, c, 0, 0, nullptr, nullptr}));
}

Expr Expr::var() {
    static const NodePtr v = make_node({NodeKind::Var, {}, 0, 0, nullptr, nullptr});
    return Expr(v);
}

std::optional<cplx> Expr::as_const() const {
    cplx c;
    if (is_const(root_, &c)) return c;
    return std::nullopt;
}

Expr operator+(const Expr& a, const Expr& b) {
    cplx ca, cb;
    const bool ka = is_const(a.root_ptr(), &ca), kb = is_const(b.root_ptr(), &cb);
    if (ka && kb) return Expr::constant(ca + cb);
    if (ka && ca == cplx(0)) return b;
    if (kb && cb == cplx(0)) return a;
    return Expr(make_node({NodeKind::Add, {}, 0, 0, a.root_ptr(), b.root_ptr()}));
}

Expr operator-(const Expr& a, const Expr& b) {
    cplx ca, cb;
    const bool ka = is_const(a.root_ptr(), &ca), kb = is_const(b.root_ptr(), &cb);
    if (ka && kb) return Expr::constant(ca - cb);
    if (kb && cb == cplx(0)) return a;
    if (ka && ca == cplx(0)) return -b;
    return Expr(make_node({NodeKind::Sub, {}, 0, 0, a.root_ptr(), b.root_ptr()}));
}

Expr operator*(const Expr& a, const Expr& b) {
    cplx ca, cb;
    const bool ka = is_const(a.root_ptr(), &ca), kb = is_const(b.root_ptr(), &cb);
    if (ka && kb) return Expr::constant(ca * cb);
    if (ka) {
        if (ca == cplx(0)) return Expr::constant(0);
        if (ca == cplx(1)) return b;
    }
    if (kb) {
        if (cb == cplx(0)) return Expr::constant(0);
        if (cb == cplx(1)) return a;
    }
    return Expr(make_node({NodeKind::Mul, {}, 0, 0, a.root_ptr(), b.root_ptr()}));
}

Expr operator/(const Expr& a, const Expr& b) {
    cplx ca, cb;
    const bool ka = is_const(a.root_ptr(), &ca), kb = is_const(b.root_ptr(), &cb);
    if (kb && cb == cplx(0))
        throw ZeroExpression("division by the zero expression");
    if (ka && kb) return Expr::constant(ca / cb);
    if (ka && ca == cplx(0)) return Expr::constant(0);
    if (kb) return Expr::constant(cplx(1) / cb) * a;
    return Expr(make_node({NodeKind::Div, {}, 0, 0, a.root_ptr(), b.root_ptr()}));
}

Expr operator-(const Expr& a) {
    cplx c;
    if (is_const(a.root_ptr(), &c)) return Expr::constant(-c);
    if (a.root() && a.root()->kind == NodeKind::Neg) return Expr(a.root()->a);
    return Expr(make_node({NodeKind::Neg, {}, 0, 0, a.root_ptr(), nullptr}));
}

Expr pow_expr(const Expr& base, double exponent) {
    if (!std::isfinite(exponent))
        throw Error("pow_expr: exponent must be finite");
    const double r = std::round(exponent);
    if (std::abs(exponent - r) < 1e-12 && std::abs(r) <= 1e6)
        return ipow_expr(base, static_cast<long>(r));
    cplx c;
    if (is_const(base.root_ptr(), &c))
        return Expr::constant(std::pow(c, cplx(exponent)));
    return Expr(make_node({NodeKind::Pow, {}, exponent, 0, base.root_ptr(), nullptr}));
}

Expr ipow_expr(const Expr& base, long n) {
    if (n == 0) return Expr::constant(1);
    if (n == 1) return base;
    cplx c;
    if (is_const(base.root_ptr(), &c)) {
        if (c == cplx(0) && n < 0)
            throw ZeroExpression("negative power of the zero expression");
        return Expr::constant(ipow_eval(c, n));
    }
    return Expr(make_node({NodeKind::IntPow, {}, 0, n, base.root_ptr(), nullptr}));
}

Expr exp_expr(const Expr& a) {
    cplx c;
    if (is_const(a.root_ptr(), &c)) return Expr::constant(std::exp(c));
    return Expr(make_node({NodeKind::Exp, {}, 0, 0, a.root_ptr(), nullptr}));
}

Expr log_expr(const Expr& a) {
    cplx c;
    if (is_const(a.root_ptr(), &c)) {
        if (c == cplx(0)) throw ZeroExpression("log of the zero expression");
        return Expr::constant(std::log(c));
    }
    return Expr(make_node({NodeKind::Log, {}, 0, 0, a.root_ptr(), nullptr}));
}

namespace {

cplx eval_node(const Node* n, cplx z) {
    switch (n->kind) {
        case NodeKind::Const: return n->value;
        case NodeKind::Var: return z;
        case NodeKind::Add: return eval_node(n->a.get(), z) + eval_node(n->b.get(), z);
        case NodeKind::Sub: return eval_node(n->a.get(), z) - eval_node(n->b.get(), z);
        case NodeKind::Mul: return eval_node(n->a.get(), z) * eval_node(n->b.get(), z);
        case NodeKind::Div: return eval_node(n->a.get(), z) / eval_node(n->b.get(), z);
        case NodeKind::Neg: return -eval_node(n->a.get(), z);
        case NodeKind::Pow: return std::pow(eval_node(n->a.get(), z), cplx(n->exponent));
        case NodeKind::IntPow: return ipow_eval(eval_node(n->a.get(), z), n->ipower);
        case NodeKind::Exp: return std::exp(eval_node(n->a.get(), z));
        case NodeKind::Log: return std::log(eval_node(n->a.get(), z));
    }
    return {};
}

} // namespace

cplx Expr::eval(cplx z) const {
    if (!root_) throw Error("eval of empty expression");
    return eval_node(root_.get(), z);
}

namespace {

Expr diff_node(const NodePtr& n);

Expr wrap(const NodePtr& n) { return Expr(n); }

Expr diff_node(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::Const: return Expr::constant(0);
        case NodeKind::Var: return Expr::constant(1);
        case NodeKind::Add: return diff_node(n->a) + diff_node(n->b);
        case NodeKind::Sub: return diff_node(n->a) - diff_node(n->b);
        case NodeKind::Neg: return -diff_node(n->a);
        case NodeKind::Mul:
            return diff_node(n->a) * wrap(n->b) + wrap(n->a) * diff_node(n->b);
        case NodeKind::Div:
            return (diff_node(n->a) * wrap(n->b) - wrap(n->a) * diff_node(n->b)) /
                   ipow_expr(wrap(n->b), 2);
        case NodeKind::Pow:
            return Expr::constant(n->exponent) *
                   (pow_expr(wrap(n->a), n->exponent - 1.0) * diff_node(n->a));
        case NodeKind::IntPow:
            return Expr::constant(static_cast<double>(n->ipower)) *
                   (ipow_expr(wrap(n->a), n->ipower - 1) * diff_node(n->a));
        case NodeKind::Exp: return exp_expr(wrap(n->a)) * diff_node(n->a);
        case NodeKind::Log: return diff_node(n->a) / wrap(n->a);
    }
    return {};
}

} // namespace

Expr differentiate(const Expr& e) {
    if (e.empty()) throw Error("differentiate of empty expression");
    return diff_node(e.root_ptr());
}

Expr schwarzian(const Expr& e) {
    const Expr d1 = differentiate(e);
    if (auto c = d1.as_const(); c && *c == cplx(0))
        throw ConstantExpression("schwarzian of a constant expression");
    const Expr ratio = differentiate(d1) / d1;
    return differentiate(ratio) - Expr::constant(0.5) * (ratio * ratio);
}

namespace {

Expr subst_node(const NodePtr& n, const Expr& repl,
                std::unordered_map<const Node*, Expr>& memo) {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Expr out;
    switch (n->kind) {
        case NodeKind::Const: out = Expr(n); break;
        case NodeKind::Var: out = repl; break;
        case NodeKind::Add: out = subst_node(n->a, repl, memo) + subst_node(n->b, repl, memo); break;
        case NodeKind::Sub: out = subst_node(n->a, repl, memo) - subst_node(n->b, repl, memo); break;
        case NodeKind::Mul: out = subst_node(n->a, repl, memo) * subst_node(n->b, repl, memo); break;
        case NodeKind::Div: out = subst_node(n->a, repl, memo) / subst_node(n->b, repl, memo); break;
        case NodeKind::Neg: out = -subst_node(n->a, repl, memo); break;
        case NodeKind::Pow: out = pow_expr(subst_node(n->a, repl, memo), n->exponent); break;
        case NodeKind::IntPow: out = ipow_expr(subst_node(n->a, repl, memo), n->ipower); break;
        case NodeKind::Exp: out = exp_expr(subst_node(n->a, repl, memo)); break;
        case NodeKind::Log: out = log_expr(subst_node(n->a, repl, memo)); break;
    }
    memo.emplace(n.get(), out);
    return out;
}

} // namespace

Expr substitute(const Expr& e, const Expr& repl) {
    if (e.empty()) throw Error("substitute into empty expression");
    std::unordered_map<const Node*, Expr> memo;
    return subst_node(e.root_ptr(), repl, memo);
}

namespace {

void format_node(const Node* n, std::string& out);

void format_child(const Node* n, std::string& out, bool parens) {
    if (parens) out += '(';
    format_node(n, out);
    if (parens) out += ')';
}

bool is_sum(const Node* n) {
    return n->kind == NodeKind::Add || n->kind == NodeKind::Sub;
}

bool is_atom(const Node* n) {
    return n->kind == NodeKind::Const || n->kind == NodeKind::Var ||
           n->kind == NodeKind::Exp || n->kind == NodeKind::Log;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void format_node(const Node* n, std::string& out) {
    switch (n->kind) {
        case NodeKind::Const: {
            const cplx c = n->value;
            if (c.imag() == 0.0) {
                if (c.real() < 0) {
                    out += '(' + format_real(c.real()) + ')';
                } else {
                    out += format_real(c.real());
                }
            } else {
                out += '(' + format_real(c.real()) + "+" + format_real(c.imag()) + "*i)";
            }
            break;
        }
        case NodeKind::Var: out += 'z'; break;
        case NodeKind::Add:
            format_node(n->a.get(), out);
            out += " + ";
            format_node(n->b.get(), out);
            break;
        case NodeKind::Sub:
            format_node(n->a.get(), out);
            out += " - ";
            format_child(n->b.get(), out, is_sum(n->b.get()));
            break;
        case NodeKind::Mul:
            format_child(n->a.get(), out, is_sum(n->a.get()));
            out += "*";
            format_child(n->b.get(), out, is_sum(n->b.get()));
            break;
        case NodeKind::Div:
            format_child(n->a.get(), out, is_sum(n->a.get()));
            out += "/";
            format_child(n->b.get(), out, !is_atom(n->b.get()));
            break;
        case NodeKind::Neg:
            out += '-';
            format_child(n->a.get(), out, !is_atom(n->a.get()));
            break;
        case NodeKind::Pow:
            format_child(n->a.get(), out, !is_atom(n->a.get()));
            out += "^(" + format_real(n->exponent) + ')';
            break;
        case NodeKind::IntPow:
            format_child(n->a.get(), out, !is_atom(n->a.get()));
            out += '^';
            if (n->ipower < 0) {
                out += '(' + std::to_string(n->ipower) + ')';
            } else {
                out += std::to_string(n->ipower);
            }
            break;
        case NodeKind::Exp:
            out += "exp(";
            format_node(n->a.get(), out);
            out += ')';
            break;
        case NodeKind::Log:
            out += "log(";
            format_node(n->a.get(), out);
            out += ')';
            break;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    if (e.empty()) return "<empty>";
    std::string out;
    format_node(e.root(), out);
    return out;
}

std::string to_string(const Puncture& p) {
    if (p.infinite) return "inf";
    std::string s = format_real(p.z.real());
    if (p.z.imag() != 0.0) s += (p.z.imag() < 0 ? "" : "+") + format_real(p.z.imag()) + "i";
    return s;
}

namespace {

// Generic sample set for sampling-based identity tests: three rings of
// irrational-ish radii, angles offset from the axes and the negative-real
// branch cut.
const std::vector<cplx>& sample_points() {
    static const std::vector<cplx> pts = [] {
        std::vector<cplx> v;
        const double radii[] = {0.3731, 0.8117, 1.4523, 2.2971};
        const double angles[] = {0.413, 1.207, 2.011, -0.871, -1.923, 2.744};
        for (double r : radii)
            for (double a : angles)
                v.push_back(std::polar(r, a));
        return v;
    }();
    return pts;
}

} // namespace

bool numerically_equal(const Expr& a, const Expr& b, double tol) {
    int valid = 0;
    for (cplx z : sample_points()) {
        const cplx va = a.eval(z), vb = b.eval(z);
        const bool fa = std::isfinite(va.real()) && std::isfinite(va.imag());
        const bool fb = std::isfinite(vb.real()) && std::isfinite(vb.imag());
        if (!fa || !fb) continue;
        const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
        if (std::abs(va - vb) > tol * scale) return false;
        ++valid;
    }
    if (valid < 8)
        throw Error("numerically_equal: too few finite samples to decide");
    return true;
}

bool is_zero_numeric(const Expr& e, double tol) {
    if (auto c = e.as_const()) return *c == cplx(0);
    return numerically_equal(e, Expr::constant(0), tol);
}

} // namespace cmcface
