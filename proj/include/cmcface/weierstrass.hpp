#ifndef CMCFACE_WEIERSTRASS_HPP
#define CMCFACE_WEIERSTRASS_HPP

#include <string>
#include <vector>

#include "cmcface/branch.hpp"
#include "cmcface/expr.hpp"

namespace cmcface {

/// Weierstrass data (g, omega) on a genus-0 domain, omega stored as its
/// coefficient w(z) in the fixed chart (omega = w dz).  Derived expressions
/// (dg and the Hopf coefficient q = w g') are built once at construction.
struct WeierstrassData {
    Expr g;
    Expr omega;
    Expr dg;    // g'
    Expr hopf;  // q(z) = w(z) g'(z), coefficient of Q = q dz^2
    std::vector<Puncture> punctures;
    cplx basepoint{};
    bool umbilic = false; // Q identically zero
    std::vector<std::string> warnings;

    /// All expressions a BranchState at a point of this data should track.
    std::vector<Expr> tracked_exprs() const { return {g, omega, dg, hopf}; }

    BranchState branch_at(cplx z) const { return BranchState::at(z, tracked_exprs()); }
};

/// Build data from raw parts; computes derived expressions, the umbilic
/// flag and validity warnings.  Throws ValidationError on hard violations
/// (basepoint at a puncture/pole, |g(basepoint)| = 1, degenerate metric).
WeierstrassData make_weierstrass(Expr g, Expr omega, std::vector<Puncture> punctures,
                                 cplx basepoint);

enum class ExampleFamily { Horosphere, Enneper, Helicoid, Catenoid };

ExampleFamily example_family_from_name(const std::string& name);
const char* to_string(ExampleFamily family);

/// Built-in catalogue:
///   horosphere (c1, c2):  g = c1,   omega = c2 dz          on C
///   enneper (c):          g = z,    omega = c dz            on C
///   helicoid (c):         g = e^z,  omega = i c e^{-z} dz   on C
///   catenoid (mu):        g = z^mu, omega = (1-mu^2)/(4 mu) z^{-(mu+1)} dz
///                                                           on C \ {0}
WeierstrassData make_example(ExampleFamily family, const std::vector<double>& params);

/// q(z) = w(z) g'(z).
Expr hopf_differential(const WeierstrassData& d);

struct MetricSample {
    cplx z{};
    double ds2 = 0;      // conformal factor of ds^2 = (1-|g|^2)^2 |w|^2
    double dshat2 = 0;   // (1+|g|^2)^2 |w|^2
    double K = 0;        // Gauss curvature of ds^2 (undefined at singular pts)
    bool K_defined = false;
    double Khat = 0;     // Gauss curvature of dshat^2, <= 0
    cplx q{};            // Hopf coefficient at z
    double abs_g = 0;    // |g(z)|; the sheets |g| < 1 and |g| > 1 carry
                         // opposite co-orientations of the future normal
    bool singular = false;
};

/// Pointwise metric quantities; branched evaluation through `branch`
/// (which must sit at z and track the data's expressions).
MetricSample metric_at(const WeierstrassData& d, cplx z, const BranchState& branch,
                       double tol = 1e-6);

/// Principal-branch convenience overload.
MetricSample metric_at(const WeierstrassData& d, cplx z, double tol = 1e-6);

/// SU(1,1) gauge action on the data:
///   g^ = (p g + q)/(qbar g + pbar),  w^ = (qbar g + pbar)^2 w,
/// with p pbar - q qbar = 1.  Leaves the Hopf differential invariant.
WeierstrassData gauge_transform(const WeierstrassData& d, cplx p, cplx q);

/// (lambda g, lambda^{-1} w); lambda real, nonzero.
WeierstrassData lambda_deform(const WeierstrassData& d, double lambda);

/// Per puncture: lambda_j = 1/|g(p_j)| (0 when |g| -> infinity, +inf when
/// |g| -> 0).  Any lambda outside {0, +-lambda_j} keeps |lambda g| != 1 at
/// every puncture.  Requires exact orders; throws UndeterminedLimit.
std::vector<double> excluded_lambdas(const WeierstrassData& d);

/// Data rewritten in the chart w = 1/z (for ends at infinity):
/// g_w = g(1/w), omega_w = -w^{-2} omega(1/w); punctures are inverted.
WeierstrassData invert_chart(const WeierstrassData& d);

} // namespace cmcface

#endif // CMCFACE_WEIERSTRASS_HPP
