#include <cmath>
#include <limits>
#include <unordered_map>
#include <vector>

#include "cmcface/expr.hpp"

namespace cmcface {

namespace {

constexpr double kInfOrder = std::numeric_limits<double>::infinity();

using OrderCoeff = std::pair<double, cplx>; // order + leading coefficient at 0

// Recursive exact local analysis at the origin: e(z) ~ c z^m with c != 0,
// or m = +inf for the zero expression.  Returns nullopt whenever the tree
// does not resolve the leading term (cancellation, essential singularity,
// logarithmic behavior).
std::optional<OrderCoeff> exact_at0(const Node* n,
                                    std::unordered_map<const Node*, std::optional<OrderCoeff>>& memo) {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::optional<OrderCoeff> out;
    const auto rec = [&](const NodePtr& c) { return exact_at0(c.get(), memo); };
    switch (n->kind) {
        case NodeKind::Const:
            out = (n->value == cplx(0)) ? OrderCoeff{kInfOrder, 0} : OrderCoeff{0.0, n->value};
            break;
        case NodeKind::Var:
            out = OrderCoeff{1.0, 1.0};
            break;
        case NodeKind::Neg:
            if (auto a = rec(n->a)) out = OrderCoeff{a->first, -a->second};
            break;
        case NodeKind::Add:
        case NodeKind::Sub: {
            auto a = rec(n->a), b = rec(n->b);
            if (!a || !b) break;
            const cplx cb = (n->kind == NodeKind::Sub) ? -b->second : b->second;
            if (a->first == kInfOrder) { out = OrderCoeff{b->first, cb}; break; }
            if (b->first == kInfOrder) { out = *a; break; }
            if (a->first < b->first - 1e-12) { out = *a; break; }
            if (b->first < a->first - 1e-12) { out = OrderCoeff{b->first, cb}; break; }
            const cplx sum = a->second + cb;
            if (std::abs(sum) <= 1e-12 * (std::abs(a->second) + std::abs(cb)))
                break; // leading terms cancel; not resolved at this level
            out = OrderCoeff{a->first, sum};
            break;
        }
        case NodeKind::Mul: {
            auto a = rec(n->a), b = rec(n->b);
            if (!a || !b) break;
            if (a->first == kInfOrder || b->first == kInfOrder) {
                out = OrderCoeff{kInfOrder, 0};
                break;
            }
            out = OrderCoeff{a->first + b->first, a->second * b->second};
            break;
        }
        case NodeKind::Div: {
            auto a = rec(n->a), b = rec(n->b);
            if (!a || !b || b->first == kInfOrder) break;
            if (a->first == kInfOrder) { out = OrderCoeff{kInfOrder, 0}; break; }
            out = OrderCoeff{a->first - b->first, a->second / b->second};
            break;
        }
        case NodeKind::Pow: {
            auto a = rec(n->a);
            if (!a) break;
            if (a->first == kInfOrder) {
                if (n->exponent > 0) out = OrderCoeff{kInfOrder, 0};
                break;
            }
            out = OrderCoeff{n->exponent * a->first, std::pow(a->second, cplx(n->exponent))};
            break;
        }
        case NodeKind::IntPow: {
            auto a = rec(n->a);
            if (!a) break;
            if (a->first == kInfOrder) {
                if (n->ipower > 0) out = OrderCoeff{kInfOrder, 0};
                break;
            }
            cplx acc(1.0);
            const long m = std::abs(n->ipower);
            for (long k = 0; k < m; ++k) acc *= a->second;
            if (n->ipower < 0) acc = cplx(1.0) / acc;
            out = OrderCoeff{static_cast<double>(n->ipower) * a->first, acc};
            break;
        }
        case NodeKind::Exp: {
            auto a = rec(n->a);
            if (!a) break;
            if (a->first == kInfOrder || a->first > 1e-12) {
                out = OrderCoeff{0.0, 1.0};
            } else if (std::abs(a->first) <= 1e-12) {
                out = OrderCoeff{0.0, std::exp(a->second)};
            }
            // negative order: essential singularity, unresolved
            break;
        }
        case NodeKind::Log: {
            auto a = rec(n->a);
            if (!a) break;
            if (std::abs(a->first) <= 1e-12 && std::abs(a->second - cplx(1)) > 1e-12)
                out = OrderCoeff{0.0, std::log(a->second)};
            // otherwise logarithmic singularity or log(1 + small): unresolved
            break;
        }
    }
    memo.emplace(n, out);
    return out;
}

// log-log regression of |e| on shrinking circles about the origin.
double regression_order(const Expr& e, double r0) {
    constexpr int kRings = 4, kAngles = 8;
    std::vector<double> level(kRings), spread(kRings);
    for (int k = 0; k < kRings; ++k) {
        const double r = r0 / static_cast<double>(1 << k);
        double sum = 0, lo = kInfOrder, hi = -kInfOrder;
        int valid = 0;
        for (int j = 0; j < kAngles; ++j) {
            const double ang = 2.0 * M_PI * (j + 0.37) / kAngles;
            const cplx v = e.eval(std::polar(r, ang));
            const double m = std::abs(v);
            if (std::isfinite(m) && m > 0) {
                const double lm = std::log(m);
                sum += lm;
                lo = std::min(lo, lm);
                hi = std::max(hi, lm);
                ++valid;
            }
        }
        if (valid < kAngles / 2)
            throw InconsistentOrder("order_at: expression not evaluable near the point");
        level[k] = sum / valid;
        spread[k] = hi - lo;
        // For a power-type leading term the angular spread of log|e| stays
        // bounded as r -> 0; essential singularities blow it up even when
        // the angular mean cancels.
        if (k > 0 && spread[k] > spread[k - 1] + 1.0 && spread[k] > 2.0)
            throw InconsistentOrder(
                "order_at: angular spread grows toward the point (essential singularity?)");
    }
    double smin = kInfOrder, smax = -kInfOrder;
    for (int k = 0; k + 1 < kRings; ++k) {
        const double s = (level[k] - level[k + 1]) / std::log(2.0);
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    if (smax - smin > 0.05)
        throw InconsistentOrder("order_at: log-log slopes disagree by " +
                                std::to_string(smax - smin));
    // least-squares slope of (log r, level)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < kRings; ++k) {
        const double x = std::log(r0) - k * std::log(2.0);
        sx += x;
        sy += level[k];
        sxx += x * x;
        sxy += x * level[k];
    }
    return (kRings * sxy - sx * sy) / (kRings * sxx - sx * sx);
}

} // namespace

std::optional<std::pair<double, cplx>> exact_order_coeff(const Expr& e) {
    if (e.empty()) throw Error("exact_order_coeff of empty expression");
    std::unordered_map<const Node*, std::optional<OrderCoeff>> memo;
    return exact_at0(e.root(), memo);
}

double order_at(const Expr& e, const Puncture& p, double sample_radius) {
    if (e.empty()) throw Error("order_at of empty expression");
    if (auto c = e.as_const()) {
        if (*c == cplx(0)) throw ZeroExpression("order_at of the zero expression");
        return 0.0;
    }
    Expr local;
    if (p.infinite) {
        local = substitute(e, Expr::constant(1) / Expr::var());
    } else if (p.z == cplx(0)) {
        local = e;
    } else {
        local = substitute(e, Expr::var() + Expr::constant(p.z));
    }
    if (auto oc = exact_order_coeff(local)) {
        if (oc->first == kInfOrder)
            throw ZeroExpression("order_at of the zero expression");
        return oc->first;
    }
    if (is_zero_numeric(e))
        throw ZeroExpression("order_at of the zero expression");
    return regression_order(local, sample_radius);
}

namespace {

// Dense polynomial with complex coefficients, ascending order.
using Poly = std::vector<cplx>;

double poly_norm(const Poly& p) {
    double m = 0;
    for (cplx c : p) m = std::max(m, std::abs(c));
    return m;
}

void trim(Poly& p, double rel = 1e-12) {
    const double tol = poly_norm(p) * rel;
    while (!p.empty() && std::abs(p.back()) <= tol) p.pop_back();
}

Poly add(const Poly& a, const Poly& b, cplx sb = 1.0) {
    Poly out(std::max(a.size(), b.size()), cplx(0));
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += sb * b[i];
    trim(out);
    return out;
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, cplx(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

Poly remainder(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const cplx q = a.back() / b.back();
        const size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        a.pop_back();
        trim(a, 1e-14);
    }
    return a;
}

// Approximate monic GCD via the Euclidean algorithm with a relative
// zero-remainder cutoff.
Poly approx_gcd(Poly a, Poly b, double tol = 1e-10) {
    trim(a);
    trim(b);
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        Poly r = remainder(a, b);
        if (poly_norm(r) <= tol * std::max(poly_norm(a), poly_norm(b)))
            r.clear();
        a = std::move(b);
        b = std::move(r);
        if (!b.empty()) {
            const cplx lead = b.back();
            for (cplx& c : b) c /= lead;
        }
    }
    return a;
}

struct Rational {
    Poly num, den;
};

std::optional<Rational> to_rational(const Node* n) {
    const auto rec = [&](const NodePtr& c) { return to_rational(c.get()); };
    switch (n->kind) {
        case NodeKind::Const: return Rational{{n->value}, {cplx(1)}};
        case NodeKind::Var: return Rational{{cplx(0), cplx(1)}, {cplx(1)}};
        case NodeKind::Neg: {
            auto a = rec(n->a);
            if (!a) return std::nullopt;
            for (cplx& c : a->num) c = -c;
            return a;
        }
        case NodeKind::Add:
        case NodeKind::Sub: {
            auto a = rec(n->a), b = rec(n->b);
            if (!a || !b) return std::nullopt;
            const cplx s = (n->kind == NodeKind::Sub) ? -1.0 : 1.0;
            return Rational{add(mul(a->num, b->den), mul(b->num, a->den), s),
                            mul(a->den, b->den)};
        }
        case NodeKind::Mul: {
            auto a = rec(n->a), b = rec(n->b);
            if (!a || !b) return std::nullopt;
            return Rational{mul(a->num, b->num), mul(a->den, b->den)};
        }
        case NodeKind::Div: {
            auto a = rec(n->a), b = rec(n->b);
            if (!a || !b) return std::nullopt;
            return Rational{mul(a->num, b->den), mul(a->den, b->num)};
        }
        case NodeKind::IntPow: {
            auto a = rec(n->a);
            if (!a) return std::nullopt;
            Rational out{{cplx(1)}, {cplx(1)}};
            const long m = std::abs(n->ipower);
            for (long k = 0; k < m; ++k) {
                out.num = mul(out.num, a->num);
                out.den = mul(out.den, a->den);
            }
            if (n->ipower < 0) std::swap(out.num, out.den);
            return out;
        }
        case NodeKind::Pow:
        case NodeKind::Exp:
        case NodeKind::Log:
            return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

Degree rational_degree(const Expr& e) {
    if (e.empty()) throw Error("rational_degree of empty expression");
    auto rat = to_rational(e.root());
    if (!rat) return Degree::inf();
    trim(rat->num);
    trim(rat->den);
    if (rat->den.empty())
        throw ZeroExpression("rational_degree: zero denominator after normalization");
    if (rat->num.empty()) return Degree::of(0);
    const Poly g = approx_gcd(rat->num, rat->den);
    if (g.size() > 1) {
        // reduce by the common factor: deg drops on both sides
        const long drop = static_cast<long>(g.size()) - 1;
        const long dn = static_cast<long>(rat->num.size()) - 1 - drop;
        const long dd = static_cast<long>(rat->den.size()) - 1 - drop;
        return Degree::of(std::max(std::max(dn, dd), 0L));
    }
    return Degree::of(std::max(rat->num.size(), rat->den.size()) - 1);
}

} // namespace cmcface
