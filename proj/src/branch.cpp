#include "cmcface/branch.hpp"

#include <cmath>

namespace cmcface {

namespace {

bool is_multivalued(const Node* n) {
    return n->kind == NodeKind::Pow || n->kind == NodeKind::Log;
}

void collect_postorder(const Node* n, std::vector<const Node*>& out,
                       std::unordered_map<const Node*, size_t>& seen) {
    if (!n || seen.count(n)) return;
    if (n->a) collect_postorder(n->a.get(), out, seen);
    if (n->b) collect_postorder(n->b.get(), out, seen);
    if (is_multivalued(n)) {
        seen.emplace(n, out.size());
        out.push_back(n);
    } else {
        seen.emplace(n, static_cast<size_t>(-1));
    }
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

constexpr double kBaseFloor = 1e-280;

} // namespace

BranchState BranchState::at(cplx z0, const std::vector<Expr>& exprs) {
    BranchState st;
    st.z_ = z0;
    for (const Expr& e : exprs) st.track(e);
    return st;
}

void BranchState::track(const Expr& e) {
    if (e.empty()) return;
    std::unordered_map<const Node*, size_t> seen;
    for (const Node* n : order_) seen.emplace(n, static_cast<size_t>(-2));
    std::vector<const Node*> fresh;
    collect_postorder(e.root(), fresh, seen);
    for (const Node* n : fresh) {
        if (args_.count(n)) continue;
        order_.push_back(n);
        // principal branch of the base at the current point
        const cplx base = eval_node(n->a.get());
        if (!(std::isfinite(base.real()) && std::isfinite(base.imag())) ||
            std::abs(base) < kBaseFloor)
            throw SingularityOnPath("branch tracking started at a singular point");
        args_.emplace(n, std::arg(base));
    }
}

double BranchState::unwound_arg(const Node* node) const {
    auto it = args_.find(node);
    if (it == args_.end()) throw Error("unwound_arg: node not tracked");
    return it->second;
}

cplx BranchState::eval_node(const Node* n) const {
    switch (n->kind) {
        case NodeKind::Const: return n->value;
        case NodeKind::Var: return z_;
        case NodeKind::Add: return eval_node(n->a.get()) + eval_node(n->b.get());
        case NodeKind::Sub: return eval_node(n->a.get()) - eval_node(n->b.get());
        case NodeKind::Mul: return eval_node(n->a.get()) * eval_node(n->b.get());
        case NodeKind::Div: return eval_node(n->a.get()) / eval_node(n->b.get());
        case NodeKind::Neg: return -eval_node(n->a.get());
        case NodeKind::IntPow: return ipow_eval(eval_node(n->a.get()), n->ipower);
        case NodeKind::Exp: return std::exp(eval_node(n->a.get()));
        case NodeKind::Pow: {
            const cplx base = eval_node(n->a.get());
            auto it = args_.find(n);
            if (it == args_.end()) throw Error("branched eval: Pow node not tracked");
            return std::exp(n->exponent * cplx(std::log(std::abs(base)), it->second));
        }
        case NodeKind::Log: {
            const cplx base = eval_node(n->a.get());
            auto it = args_.find(n);
            if (it == args_.end()) throw Error("branched eval: Log node not tracked");
            return cplx(std::log(std::abs(base)), it->second);
        }
    }
    return {};
}

cplx BranchState::eval(const Expr& e) const {
    if (e.empty()) throw Error("branched eval of empty expression");
    return eval_node(e.root());
}

bool BranchState::try_step(cplx z_new) {
    if (order_.empty()) {
        z_ = z_new;
        return true;
    }
    const cplx z_old = z_;
    auto saved = args_;
    z_ = z_new;
    for (const Node* n : order_) {
        const cplx base = eval_node(n->a.get());
        if (!(std::isfinite(base.real()) && std::isfinite(base.imag())) ||
            std::abs(base) < kBaseFloor) {
            args_ = std::move(saved);
            z_ = z_old;
            throw SingularityOnPath("branch point or zero base on path near z = " +
                                    std::to_string(z_new.real()) + "+" +
                                    std::to_string(z_new.imag()) + "i");
        }
        const double old_arg = args_[n];
        const double delta = std::remainder(std::arg(base) - old_arg, 2.0 * M_PI);
        if (std::abs(delta) > M_PI / 2.0) {
            args_ = std::move(saved);
            z_ = z_old;
            return false;
        }
        args_[n] = old_arg + delta;
    }
    return true;
}

void BranchState::advance_bisect(const PathSegment& seg, double t0, double t1, int depth) {
    if (try_step(seg.point(t1))) return;
    if (depth > 48)
        throw SingularityOnPath("branch continuation failed to converge (singular point on path?)");
    const double tm = 0.5 * (t0 + t1);
    advance_bisect(seg, t0, tm, depth + 1);
    advance_bisect(seg, tm, t1, depth + 1);
}

void BranchState::advance(const PathSegment& seg, double t0, double t1) {
    if (t0 == t1) return;
    if (order_.empty()) {
        z_ = seg.point(t1);
        return;
    }
    // Initial sampling before adaptive refinement: fine enough that a base
    // cannot wind by more than ~pi between consecutive samples for the
    // supported base shapes, given the declared clearance from punctures.
    const double span = std::abs(t1 - t0);
    int n = 0;
    if (seg.kind == PathSegment::Kind::Line) {
        n = std::max(8, static_cast<int>(std::ceil(4.0 * seg.length() * span)));
    } else {
        const double dang = std::abs(seg.ang1 - seg.ang0) * span;
        n = std::max({static_cast<int>(std::ceil(dang / (M_PI / 8.0))),
                      static_cast<int>(std::ceil(4.0 * seg.length() * span)), 1});
    }
    for (int k = 0; k < n; ++k) {
        const double ta = t0 + (t1 - t0) * k / n;
        const double tb = t0 + (t1 - t0) * (k + 1) / n;
        advance_bisect(seg, ta, tb, 0);
    }
}

void BranchState::advance(const PathSpec& path) {
    if (path.empty()) return;
    if (std::abs(path.start() - z_) > 1e-9 * (1.0 + std::abs(z_)))
        throw Error("BranchState::advance: path does not start at the current point");
    for (const auto& seg : path.segments()) advance(seg);
}

std::pair<cplx, BranchState> eval_continued(const Expr& e, const PathSpec& path,
                                            BranchState state) {
    state.track(e);
    state.advance(path);
    return {state.eval(e), std::move(state)};
}

} // namespace cmcface
