#ifndef CMCFACE_END_ANALYSIS_HPP
#define CMCFACE_END_ANALYSIS_HPP

#include <functional>
#include <optional>

#include "cmcface/frame.hpp"

namespace cmcface {

/// How the hyperbolic Gauss map is available for order computations.
///  - Mobius: detected from 2Q = S(g) - S(G) with S(G) = 0; G is an
///    unbranched degree-1 map, so Ord(d sigma-hat^2) = 0 at every point.
///  - Expression: a closed form supplied by the caller.
///  - None: only the numeric flow values exist.
struct GaussMap {
    enum class Kind { None, Mobius, Expression };
    Kind kind = Kind::None;
    Expr expr;

    static GaussMap none() { return {}; }
    static GaussMap mobius() { return {Kind::Mobius, {}}; }
    static GaussMap expression(Expr e) { return {Kind::Expression, std::move(e)}; }
};

/// Detect whether S(g) - 2q vanishes identically (then S(G) = 0 and G is
/// a Moebius map); undetected or umbilic data yields Kind::None.
GaussMap acquire_gauss_map(const WeierstrassData& d);

/// Per-end report.  Orders follow the pseudometric convention
/// (e^{2u} ~ |z|^{2m}); at the end at infinity everything is computed in
/// the chart w = 1/z with the differential weights included (Q gains -4).
struct EndAnalysis {
    Puncture puncture;
    bool umbilic = false;
    std::optional<double> ordQ;
    bool regular = false;
    std::optional<MonodromyResult> monodromy;
    std::optional<double> ordSigma; // order of d sigma-hat^2 = 4|dG|^2/(1+|G|^2)^2
    std::optional<double> ordLift;  // order of the lift-metric, = ordQ - ordSigma
    std::optional<bool> embedded;   // defined for regular elliptic ends with G
    std::optional<bool> lift_complete; // ordLift <= -2
    std::vector<std::string> notes;
};

/// Default loop radius for per-end monodromy (kept clear of the other
/// built-in punctures).
inline constexpr double kDefaultMonodromyRadius = 0.5;

/// Analyze one declared end.  Throws UmbilicEnd when Q == 0.  Irregular
/// ends are returned with embeddedness and ordSigma undefined.
EndAnalysis analyze_end(const WeierstrassData& d, const Puncture& puncture,
                        const GaussMap& G = GaussMap::none(),
                        const IntegratorOptions& opts = {},
                        double monodromy_radius = kDefaultMonodromyRadius,
                        IntegrationStats* stats = nullptr);

/// Embeddedness by the order equality: true iff ordSigma - ordQ == 2
/// (within 1e-6).  The inequality ordSigma - ordQ >= 2 is a theorem for
/// regular elliptic ends; violations raise InequalityViolated.
bool embedded_by_orders(double ordSigma, double ordQ);

/// Order of the lift-metric (1+|G|^2)^2 |Q/dG|^2 at the puncture.
/// Throws UmbilicEnd when Q == 0 and ConstantGauss when G is constant.
double lift_metric_order(const Expr& G, const Expr& hopf_coeff, const Puncture& p);

/// Mapping degree of G.  Moebius-detected data gives 1; closed rational
/// forms go through rational_degree; otherwise a numeric preimage count
/// (3 random targets, Newton from 40 seeds, counts must agree).  Any
/// irregular end forces infinity.
Degree gauss_degree(const WeierstrassData& d, const GaussMap& G,
                    bool* heuristic = nullptr);

/// Count of distinct Newton-converged solutions of G(z) = target, averaged
/// over targets; throws DegreeUndetermined when the counts disagree.
long preimage_count(const Expr& G, unsigned seed = 12345);

/// Same count over an arbitrary sampler (finite-difference derivative);
/// used when G exists only as numeric flow values.
long preimage_count_fn(const std::function<cplx(cplx)>& G, unsigned seed = 12345);

/// Pseudometric order of d sigma-hat^2 = 4|dG|^2/(1+|G|^2)^2 from point
/// samples of G near the puncture.  `G_local` receives points of the local
/// chart (the puncture at 0).  Log-log regression along 4 rays; the ray
/// slopes must agree to 0.05 and the result must sit within 0.05 of an
/// integer (orders of single-valued data are integers), else
/// InconsistentOrder.
double numeric_sigma_order(const std::function<cplx(cplx)>& G_local, double r0 = 0.04);

/// G along the flow: integrates the frame from the basepoint to z and
/// evaluates the hyperbolic Gauss map there.  Points unreachable within
/// clearance yield NaN.
std::function<cplx(cplx)> frame_gauss_sampler(const WeierstrassData& d,
                                              const IntegratorOptions& opts = {});

struct OssermanReport {
    int genus = 0;
    int n = 0;      // number of ends
    int chiM = 0;   // 2 - n for genus 0
    Degree degG;
    bool degG_heuristic = false;
    long rhs = 0;               // -chi(M) + n
    std::optional<long> lhs;    // 2 deg G when finite
    bool holds = false;
    bool equality = false;
    bool umbilic_surface = false;
    std::vector<EndAnalysis> per_end;
};

/// Assemble the full report for genus-0 data with declared punctures.
/// Cross-validates the equality case (equality <=> all ends regular and
/// embedded) and throws InternalInconsistency on violation.  Umbilic data
/// yields a report with umbilic_surface = true and the arithmetic skipped.
OssermanReport osserman_check(const WeierstrassData& d,
                              const GaussMap& G_user = GaussMap::none(),
                              const IntegratorOptions& opts = {},
                              IntegrationStats* stats = nullptr);

} // namespace cmcface

#endif // CMCFACE_END_ANALYSIS_HPP
