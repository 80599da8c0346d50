#ifndef CMCFACE_BRANCH_HPP
#define CMCFACE_BRANCH_HPP

#include <unordered_map>
#include <utility>
#include <vector>

#include "cmcface/expr.hpp"
#include "cmcface/path.hpp"

namespace cmcface {

/// Continuation state of a set of expressions along a path: the current
/// point plus, for every multivalued node (non-integer Pow, Log), the
/// continuously tracked (unwound) argument of its base value.  A single
/// state may serve several expressions at once; nodes are keyed by
/// identity, and the tracked set is the union over all registered roots.
class BranchState {
public:
    BranchState() = default;

    /// Principal-branch state at z0 covering the given expressions.
    static BranchState at(cplx z0, const std::vector<Expr>& exprs);

    cplx z() const { return z_; }

    /// Add the multivalued nodes of another expression (principal branch at
    /// the current point for nodes not yet tracked).
    void track(const Expr& e);

    /// Evaluate with the tracked branches.  Every multivalued node of e
    /// must be tracked.
    cplx eval(const Expr& e) const;

    /// Continue the state along one path segment, advancing z to
    /// seg.point(t1).  The state must currently sit at seg.point(t0).
    /// Throws SingularityOnPath when a base hits zero/non-finite values or
    /// the winding cannot be resolved by subdivision.
    void advance(const PathSegment& seg, double t0 = 0.0, double t1 = 1.0);

    /// Continue along a whole path (which must start at the current point).
    void advance(const PathSpec& path);

    double unwound_arg(const Node* node) const;

private:
    cplx z_{};
    std::unordered_map<const Node*, double> args_;
    std::vector<const Node*> order_; // multivalued nodes, children first

    cplx eval_node(const Node* n) const;
    bool try_step(cplx z_new); // one continuity step; false = needs subdivision
    void advance_bisect(const PathSegment& seg, double t0, double t1, int depth);
};

/// Analytic continuation of e along the path starting from `state` (which
/// must sit at the path start and track e).  Returns the continued value
/// and the updated state.
std::pair<cplx, BranchState> eval_continued(const Expr& e, const PathSpec& path,
                                            BranchState state);

} // namespace cmcface

#endif // CMCFACE_BRANCH_HPP
