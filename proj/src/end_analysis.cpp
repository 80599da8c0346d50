#include "cmcface/end_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cmcface {

namespace {

Expr localize(const Expr& e, const Puncture& p, int form_weight = 0) {
    // form_weight: 0 for functions, -2k per k-differential at infinity
    if (p.infinite) {
        Expr out = substitute(e, Expr::constant(1) / Expr::var());
        if (form_weight != 0) out = out * ipow_expr(Expr::var(), form_weight);
        return out;
    }
    if (p.z == cplx(0)) return e;
    return substitute(e, Expr::var() + Expr::constant(p.z));
}

double order_at0(const Expr& e) { return order_at(e, Puncture::at(0)); }

struct SigmaOrders {
    double oG, oGprime, ordSigma;
};

// Orders of G and dG in the local chart; ordSigma = Ord(4|dG|^2/(1+|G|^2)^2)
// with the inversion G -> 1/G applied implicitly when G(p) = infinity.
SigmaOrders sigma_orders(const Expr& G, const Puncture& p) {
    const Expr G_loc = localize(G, p);
    const Expr dG_loc = differentiate(G_loc);
    if (auto c = dG_loc.as_const(); c && *c == cplx(0))
        throw ConstantGauss("hyperbolic Gauss map is constant");
    SigmaOrders s{};
    s.oG = order_at0(G_loc);
    try {
        s.oGprime = order_at0(dG_loc);
    } catch (const ZeroExpression&) {
        throw ConstantGauss("hyperbolic Gauss map is constant");
    }
    s.ordSigma = s.oGprime - 2.0 * std::min(0.0, s.oG);
    return s;
}

bool is_elliptic_class(const Su11Class& c) {
    return c.tag == Su11Tag::Elliptic || c.tag == Su11Tag::CenterPM;
}

} // namespace

GaussMap acquire_gauss_map(const WeierstrassData& d) {
    if (d.umbilic) return GaussMap::none();
    try {
        const Expr S = schwarzian(d.g);
        const Expr twoq = Expr::constant(2) * d.hopf;
        if (numerically_equal(S, twoq)) return GaussMap::mobius();
    } catch (const Error&) {
        // fall through: no closed form detected
    }
    return GaussMap::none();
}

bool embedded_by_orders(double ordSigma, double ordQ) {
    const double diff = ordSigma - ordQ;
    if (diff < 2.0 - 1e-6)
        throw InequalityViolated(
            "Ord(d sigma-hat^2) - Ord(Q) = " + std::to_string(diff) +
            " < 2 at a regular elliptic end; upstream orders are inconsistent");
    return std::abs(diff - 2.0) <= 1e-6;
}

double lift_metric_order(const Expr& G, const Expr& hopf_coeff, const Puncture& p) {
    if (auto c = hopf_coeff.as_const(); c && *c == cplx(0))
        throw UmbilicEnd("lift metric undefined: Q == 0");
    if (is_zero_numeric(hopf_coeff))
        throw UmbilicEnd("lift metric undefined: Q == 0");
    const Expr q_loc = localize(hopf_coeff, p, -4);
    const double ordQ = order_at0(q_loc);
    const SigmaOrders s = sigma_orders(G, p);
    return 2.0 * std::min(0.0, s.oG) + ordQ - s.oGprime;
}

EndAnalysis analyze_end(const WeierstrassData& d, const Puncture& puncture,
                        const GaussMap& G, const IntegratorOptions& opts,
                        double monodromy_radius, IntegrationStats* stats) {
    if (std::find(d.punctures.begin(), d.punctures.end(), puncture) == d.punctures.end())
        throw ValidationError("analyze_end: puncture is not declared in the data");
    if (d.umbilic)
        throw UmbilicEnd("analyze_end: data is totally umbilic (Q == 0)");

    EndAnalysis a;
    a.puncture = puncture;

    const Expr q_loc = localize(d.hopf, puncture, -4);
    try {
        a.ordQ = order_at0(q_loc);
    } catch (const InconsistentOrder&) {
        a.notes.push_back("order of Q could not be determined at this end");
    }
    a.regular = a.ordQ && *a.ordQ >= -2.0 - 1e-9;

    a.monodromy = monodromy(d, puncture, monodromy_radius, opts, stats);
    const bool elliptic = is_elliptic_class(a.monodromy->classification);
    if (!elliptic)
        a.notes.push_back("end is not elliptic; embeddedness analysis does not apply");

    if (!a.regular) {
        if (a.ordQ)
            a.notes.push_back("irregular end (Ord Q < -2): G has an essential "
                              "singularity; embeddedness undefined");
        return a;
    }

    if (elliptic && G.kind != GaussMap::Kind::None) {
        if (G.kind == GaussMap::Kind::Mobius) {
            a.ordSigma = 0.0;
        } else {
            a.ordSigma = sigma_orders(G.expr, puncture).ordSigma;
        }
    } else if (elliptic) {
        // no closed form: sample G along rays into the end and regress
        try {
            std::function<cplx(cplx)> local;
            if (puncture.infinite) {
                const WeierstrassData dw = invert_chart(d);
                local = frame_gauss_sampler(dw, opts);
            } else {
                const auto sampler = frame_gauss_sampler(d, opts);
                const cplx p = puncture.z;
                local = [sampler, p](cplx zeta) { return sampler(p + zeta); };
            }
            a.ordSigma = numeric_sigma_order(local);
            a.notes.push_back("ordSigma estimated numerically from flow samples of G");
        } catch (const Error& err) {
            a.notes.push_back(std::string("no closed form for G; numeric order "
                                          "estimate failed: ") +
                              err.what());
        }
    }
    if (a.ordSigma) {
        a.ordLift = *a.ordQ - *a.ordSigma;
        a.embedded = embedded_by_orders(*a.ordSigma, *a.ordQ);
        a.lift_complete = *a.ordLift <= -2.0 + 1e-9;
        if (!*a.lift_complete)
            a.notes.push_back("lift metric is not complete at this end (Ord > -2)");
    }
    return a;
}

namespace {

long preimage_count_impl(const std::function<cplx(cplx)>& G,
                         const std::function<cplx(cplx)>& dG, double conv_tol,
                         unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> box(-1.5, 1.5);
    std::uniform_real_distribution<double> disk(-3.0, 3.0);
    const auto bad = [](cplx v) {
        return !(std::isfinite(v.real()) && std::isfinite(v.imag()));
    };

    long counts[3] = {0, 0, 0};
    for (int tcase = 0; tcase < 3; ++tcase) {
        const cplx target(box(rng), box(rng));
        std::vector<cplx> roots;
        for (int s = 0; s < 40; ++s) {
            cplx z(disk(rng), disk(rng));
            bool converged = false;
            for (int it = 0; it < 80; ++it) {
                const cplx fv = G(z) - target;
                const cplx dv = dG(z);
                if (bad(fv) || bad(dv) || std::abs(dv) < 1e-280) break;
                const cplx step = fv / dv;
                z -= step;
                if (std::abs(fv) < conv_tol * (1.0 + std::abs(target)) &&
                    std::abs(step) < conv_tol * (1.0 + std::abs(z))) {
                    converged = true;
                    break;
                }
            }
            if (!converged) continue;
            bool dup = false;
            for (cplx r : roots)
                if (std::abs(r - z) < 1e-5 * (1.0 + std::abs(r))) dup = true;
            if (!dup) roots.push_back(z);
        }
        counts[tcase] = static_cast<long>(roots.size());
    }
    if (counts[0] != counts[1] || counts[1] != counts[2])
        throw DegreeUndetermined("preimage counts disagree: " + std::to_string(counts[0]) +
                                 ", " + std::to_string(counts[1]) + ", " +
                                 std::to_string(counts[2]));
    return counts[0];
}

} // namespace

long preimage_count(const Expr& G, unsigned seed) {
    const Expr dG = differentiate(G);
    return preimage_count_impl([&](cplx z) { return G.eval(z); },
                               [&](cplx z) { return dG.eval(z); }, 1e-10, seed);
}

long preimage_count_fn(const std::function<cplx(cplx)>& G, unsigned seed) {
    const auto dG = [&](cplx z) {
        const double h = 1e-5 * (1.0 + std::abs(z));
        return (G(z + cplx(h)) - G(z - cplx(h))) / cplx(2.0 * h);
    };
    return preimage_count_impl(G, dG, 1e-7, seed);
}

double numeric_sigma_order(const std::function<cplx(cplx)>& G_local, double r0) {
    constexpr int kRays = 4, kRings = 4;
    double slopes[kRays];
    for (int i = 0; i < kRays; ++i) {
        const cplx dir = std::polar(1.0, 0.41 + i * M_PI / 2.0);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int j = 0; j < kRings; ++j) {
            const double r = r0 / double(1 << j);
            const cplx zeta = r * dir;
            const cplx step = 1e-3 * r * dir;
            const cplx Gm = G_local(zeta - step), Gp = G_local(zeta + step);
            const cplx G0 = G_local(zeta);
            const cplx dG = (Gp - Gm) / (2.0 * step);
            const double density = 4.0 * std::norm(dG) / ((1.0 + std::norm(G0)) *
                                                          (1.0 + std::norm(G0)));
            if (!(std::isfinite(density) && density > 0))
                throw InconsistentOrder("numeric_sigma_order: sampling failed on a ray");
            const double x = std::log(r), y = std::log(density);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        slopes[i] = (kRings * sxy - sx * sy) / (kRings * sxx - sx * sx);
    }
    // opposite rays cancel the first-order angular variation of the
    // density; the two pair averages are the robust slope estimates
    const double pair02 = 0.5 * (slopes[0] + slopes[2]);
    const double pair13 = 0.5 * (slopes[1] + slopes[3]);
    if (std::abs(pair02 - pair13) > 0.05)
        throw InconsistentOrder("numeric_sigma_order: ray slopes disagree by " +
                                std::to_string(std::abs(pair02 - pair13)));
    // density ~ r^{2m}: the pseudometric order is half the mean slope, and
    // must be an integer for single-valued data
    const double mean_slope = (slopes[0] + slopes[1] + slopes[2] + slopes[3]) / 4.0;
    const double m = mean_slope / 2.0;
    const double rounded = std::round(m);
    if (std::abs(m - rounded) > 0.05)
        throw InconsistentOrder("numeric_sigma_order: estimate " + std::to_string(m) +
                                " is not near an integer order");
    return rounded;
}

std::function<cplx(cplx)> frame_gauss_sampler(const WeierstrassData& d,
                                              const IntegratorOptions& opts) {
    return [d, opts](cplx z) -> cplx {
        try {
            FrameState s = frame_start(d, d.basepoint);
            s = integrate_frame(d, PathSpec::line(d.basepoint, z), std::move(s), opts);
            return hyperbolic_gauss_at(s, d);
        } catch (const Error&) {
            return cplx(std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN());
        }
    };
}

Degree gauss_degree(const WeierstrassData& d, const GaussMap& G, bool* heuristic) {
    if (heuristic) *heuristic = false;
    if (d.umbilic) return Degree::of(0); // constant G
    for (const auto& p : d.punctures) {
        const double ordQ = order_at0(localize(d.hopf, p, -4));
        if (ordQ < -2.0 - 1e-9) return Degree::inf(); // irregular end
    }
    switch (G.kind) {
        case GaussMap::Kind::Mobius:
            return Degree::of(1);
        case GaussMap::Kind::Expression: {
            const Degree rd = rational_degree(G.expr);
            if (!rd.infinite) return rd;
            if (heuristic) *heuristic = true;
            return Degree::of(preimage_count(G.expr));
        }
        case GaussMap::Kind::None: {
            if (heuristic) *heuristic = true;
            const long n = preimage_count_fn(frame_gauss_sampler(d));
            if (n == 0)
                throw DegreeUndetermined(
                    "Newton preimage search found no solutions (flow-sampled G)");
            return Degree::of(n);
        }
    }
    throw DegreeUndetermined("unreachable");
}

OssermanReport osserman_check(const WeierstrassData& d, const GaussMap& G_user,
                              const IntegratorOptions& opts, IntegrationStats* stats) {
    OssermanReport r;
    r.genus = 0;
    r.n = static_cast<int>(d.punctures.size());
    r.chiM = 2 - r.n;
    r.rhs = -r.chiM + r.n;

    if (d.umbilic) {
        r.umbilic_surface = true;
        r.degG = Degree::of(0);
        for (const auto& p : d.punctures) {
            EndAnalysis a;
            a.puncture = p;
            a.umbilic = true;
            a.notes.push_back("totally umbilic data (Q == 0): order analysis skipped");
            try {
                a.monodromy = monodromy(d, p, kDefaultMonodromyRadius, opts, stats);
            } catch (const Error& e) {
                a.notes.push_back(std::string("monodromy unavailable: ") + e.what());
            }
            r.per_end.push_back(std::move(a));
        }
        return r;
    }

    const GaussMap G = (G_user.kind != GaussMap::Kind::None) ? G_user
                                                             : acquire_gauss_map(d);
    for (const auto& p : d.punctures)
        r.per_end.push_back(analyze_end(d, p, G, opts, kDefaultMonodromyRadius, stats));

    r.degG = gauss_degree(d, G, &r.degG_heuristic);
    if (r.degG.infinite) {
        r.lhs = std::nullopt;
        r.holds = true;
        r.equality = false;
    } else {
        r.lhs = 2 * r.degG.value;
        r.holds = *r.lhs >= r.rhs;
        r.equality = *r.lhs == r.rhs;
    }

    // Theorem cross-check: equality <=> every end regular and embedded.
    const bool all_elliptic =
        std::all_of(r.per_end.begin(), r.per_end.end(), [](const EndAnalysis& a) {
            return a.monodromy && is_elliptic_class(a.monodromy->classification);
        });
    const bool decidable =
        std::all_of(r.per_end.begin(), r.per_end.end(), [](const EndAnalysis& a) {
            return !a.regular || a.embedded.has_value();
        });
    if (all_elliptic && decidable) {
        const bool all_reg_emb =
            std::all_of(r.per_end.begin(), r.per_end.end(), [](const EndAnalysis& a) {
                return a.regular && a.embedded && *a.embedded;
            });
        if (r.equality != all_reg_emb)
            throw InternalInconsistency(
                "Osserman equality case disagrees with per-end regular/embedded status");
    }
    return r;
}

} // namespace cmcface
