#include "cmcface/weierstrass.hpp"

#include <cmath>

namespace cmcface {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// mu + nu at each puncture should be an integer for data that descends to
// the punctured domain (mu = order of g, nu = order of omega as a 1-form).
void check_order_integrality(WeierstrassData& d) {
    for (const auto& p : d.punctures) {
        try {
            Expr g_loc, w_loc;
            if (p.infinite) {
                const Expr inv = Expr::constant(1) / Expr::var();
                g_loc = substitute(d.g, inv);
                w_loc = -substitute(d.omega, inv) * ipow_expr(Expr::var(), -2);
            } else {
                const Expr shift = Expr::var() + Expr::constant(p.z);
                g_loc = substitute(d.g, shift);
                w_loc = substitute(d.omega, shift);
            }
            const auto og = exact_order_coeff(g_loc);
            const auto ow = exact_order_coeff(w_loc);
            if (!og || !ow) continue; // only validated when orders are exact
            const double sum = og->first + ow->first;
            if (std::abs(sum - std::round(sum)) > 1e-9)
                d.warnings.push_back("orders of g and omega at puncture " + to_string(p) +
                                     " sum to " + std::to_string(sum) +
                                     ", not an integer; data does not descend to the "
                                     "punctured domain");
        } catch (const Error&) {
            // non-exact or degenerate local data: nothing to validate
        }
    }
}

void validate(WeierstrassData& d) {
    for (const auto& p : d.punctures)
        if (!p.infinite && std::abs(p.z - d.basepoint) < 1e-12)
            throw ValidationError("basepoint coincides with a puncture");

    const cplx g0 = d.g.eval(d.basepoint);
    const cplx w0 = d.omega.eval(d.basepoint);
    if (!finite(g0))
        throw ValidationError("basepoint is a pole of g");
    if (!finite(w0))
        throw ValidationError("basepoint is a pole of omega");
    if (std::abs(std::abs(g0) - 1.0) < 1e-9)
        throw ValidationError("|g(basepoint)| = 1: basepoint lies on the singular set");

    // dshat^2 = (1+|g|^2)^2 |w|^2 must be positive away from the punctures.
    // Sampled check on rings around the basepoint.
    int checked = 0;
    for (int ring = 0; ring < 8 && checked < 1000; ++ring) {
        const double r = 0.11 * (ring + 1);
        for (int j = 0; j < 16; ++j) {
            const cplx z = d.basepoint + std::polar(r, 2.0 * M_PI * (j + 0.31) / 16);
            bool near_puncture = false;
            for (const auto& p : d.punctures)
                if (!p.infinite && std::abs(z - p.z) < 0.05) near_puncture = true;
            if (near_puncture) continue;
            const cplx g = d.g.eval(z), w = d.omega.eval(z);
            if (!finite(g) || !finite(w)) continue; // pole of g: compensated elsewhere
            const double a = 1.0 + std::norm(g);
            if (a * a * std::norm(w) <= 0.0)
                throw ValidationError("dshat^2 vanishes at a sampled interior point (omega "
                                      "has an uncompensated zero)");
            ++checked;
        }
    }

    check_order_integrality(d);
}

} // namespace

WeierstrassData make_weierstrass(Expr g, Expr omega, std::vector<Puncture> punctures,
                                 cplx basepoint) {
    WeierstrassData d;
    d.g = std::move(g);
    d.omega = std::move(omega);
    d.dg = differentiate(d.g);
    d.hopf = d.omega * d.dg;
    d.punctures = std::move(punctures);
    d.basepoint = basepoint;
    d.umbilic = is_zero_numeric(d.hopf);
    validate(d);
    return d;
}

ExampleFamily example_family_from_name(const std::string& name) {
    if (name == "horosphere") return ExampleFamily::Horosphere;
    if (name == "enneper") return ExampleFamily::Enneper;
    if (name == "helicoid") return ExampleFamily::Helicoid;
    if (name == "catenoid") return ExampleFamily::Catenoid;
    throw BadParams("unknown example family '" + name + "'");
}

const char* to_string(ExampleFamily family) {
    switch (family) {
        case ExampleFamily::Horosphere: return "horosphere";
        case ExampleFamily::Enneper: return "enneper";
        case ExampleFamily::Helicoid: return "helicoid";
        case ExampleFamily::Catenoid: return "catenoid";
    }
    return "?";
}

WeierstrassData make_example(ExampleFamily family, const std::vector<double>& params) {
    const Expr z = Expr::var();
    switch (family) {
        case ExampleFamily::Horosphere: {
            if (params.size() != 2)
                throw BadParams("horosphere expects params (c1, c2)");
            const double c1 = params[0], c2 = params[1];
            if (c2 == 0.0) throw BadParams("horosphere: c2 must be nonzero");
            return make_weierstrass(Expr::constant(c1), Expr::constant(c2),
                                    {Puncture::inf()}, cplx(0));
        }
        case ExampleFamily::Enneper: {
            if (params.size() != 1) throw BadParams("enneper expects params (c)");
            const double c = params[0];
            if (c == 0.0) throw BadParams("enneper: c must be nonzero");
            return make_weierstrass(z, Expr::constant(c), {Puncture::inf()}, cplx(0));
        }
        case ExampleFamily::Helicoid: {
            if (params.size() != 1) throw BadParams("helicoid expects params (c)");
            const double c = params[0];
            if (c == 0.0) throw BadParams("helicoid: c must be nonzero");
            return make_weierstrass(exp_expr(z),
                                    Expr::constant(cplx(0, c)) * exp_expr(-z),
                                    {Puncture::inf()}, cplx(1));
        }
        case ExampleFamily::Catenoid: {
            if (params.size() != 1) throw BadParams("catenoid expects params (mu)");
            const double mu = params[0];
            if (!(mu > 0.0) || mu == 1.0)
                throw BadParams("catenoid: mu must be positive and != 1");
            const Expr g = pow_expr(z, mu);
            const Expr w = Expr::constant((1.0 - mu * mu) / (4.0 * mu)) *
                           pow_expr(z, -(mu + 1.0));
            return make_weierstrass(g, w, {Puncture::at(0), Puncture::inf()}, cplx(2));
        }
    }
    throw BadParams("unknown example family");
}

Expr hopf_differential(const WeierstrassData& d) { return d.hopf; }

MetricSample metric_at(const WeierstrassData& d, cplx z, const BranchState& branch,
                       double tol) {
    if (std::abs(branch.z() - z) > 1e-9 * (1.0 + std::abs(z)))
        throw Error("metric_at: branch state does not sit at z");
    for (const auto& p : d.punctures)
        if (!p.infinite && std::abs(z - p.z) < 1e-12)
            throw PoleOfOmega("metric_at evaluated at a puncture");

    const cplx g = branch.eval(d.g);
    const cplx w = branch.eval(d.omega);
    const cplx gp = branch.eval(d.dg);
    if (!finite(w) || !finite(g))
        throw PoleOfOmega("metric_at: g or omega is not finite at z");

    MetricSample m;
    m.z = z;
    const double ag2 = std::norm(g), aw2 = std::norm(w), agp2 = std::norm(gp);
    const double om = 1.0 - ag2, op = 1.0 + ag2;
    m.ds2 = om * om * aw2;
    m.dshat2 = op * op * aw2;
    m.q = branch.eval(d.hopf);
    m.abs_g = std::abs(g);
    m.singular = std::abs(m.abs_g - 1.0) <= tol;
    if (!m.singular && aw2 > 0.0) {
        m.K = 4.0 * agp2 / (om * om * om * om * aw2);
        m.K_defined = true;
    }
    if (aw2 > 0.0) m.Khat = -4.0 * agp2 / (op * op * op * op * aw2);
    return m;
}

MetricSample metric_at(const WeierstrassData& d, cplx z, double tol) {
    for (const auto& p : d.punctures)
        if (!p.infinite && std::abs(z - p.z) < 1e-12)
            throw PoleOfOmega("metric_at evaluated at a puncture");
    try {
        return metric_at(d, z, d.branch_at(z), tol);
    } catch (const SingularityOnPath&) {
        throw PoleOfOmega("metric_at: g or omega is singular at z");
    }
}

WeierstrassData gauge_transform(const WeierstrassData& d, cplx p, cplx q) {
    if (std::abs(std::norm(p) - std::norm(q) - 1.0) > 1e-12)
        throw NotSU11Params("gauge_transform: p pbar - q qbar != 1");
    const Expr num = Expr::constant(p) * d.g + Expr::constant(q);
    const Expr den = Expr::constant(std::conj(q)) * d.g + Expr::constant(std::conj(p));
    const Expr g_hat = num / den;
    const Expr w_hat = ipow_expr(den, 2) * d.omega;
    return make_weierstrass(g_hat, w_hat, d.punctures, d.basepoint);
}

WeierstrassData lambda_deform(const WeierstrassData& d, double lambda) {
    if (lambda == 0.0) throw ZeroLambda("lambda_deform: lambda must be nonzero");
    return make_weierstrass(Expr::constant(lambda) * d.g,
                            Expr::constant(1.0 / lambda) * d.omega, d.punctures,
                            d.basepoint);
}

std::vector<double> excluded_lambdas(const WeierstrassData& d) {
    std::vector<double> out;
    for (const auto& p : d.punctures) {
        Expr g_loc;
        if (p.infinite) {
            g_loc = substitute(d.g, Expr::constant(1) / Expr::var());
        } else if (p.z == cplx(0)) {
            g_loc = d.g;
        } else {
            g_loc = substitute(d.g, Expr::var() + Expr::constant(p.z));
        }
        const auto oc = exact_order_coeff(g_loc);
        if (!oc)
            throw UndeterminedLimit("excluded_lambdas: |g| has no exact limit at puncture " +
                                    to_string(p));
        if (oc->first > 0 || oc->first == std::numeric_limits<double>::infinity()) {
            out.push_back(std::numeric_limits<double>::infinity()); // |g| -> 0
        } else if (oc->first < 0) {
            out.push_back(0.0); // |g| -> infinity
        } else {
            out.push_back(1.0 / std::abs(oc->second));
        }
    }
    return out;
}

WeierstrassData invert_chart(const WeierstrassData& d) {
    const Expr inv = Expr::constant(1) / Expr::var();
    WeierstrassData out;
    out.g = substitute(d.g, inv);
    out.omega = -substitute(d.omega, inv) * ipow_expr(Expr::var(), -2);
    out.dg = differentiate(out.g);
    out.hopf = out.omega * out.dg;
    out.umbilic = d.umbilic;
    for (const auto& p : d.punctures) {
        if (p.infinite)
            out.punctures.push_back(Puncture::at(0));
        else if (p.z == cplx(0))
            out.punctures.push_back(Puncture::inf());
        else
            out.punctures.push_back(Puncture::at(cplx(1) / p.z));
    }
    out.basepoint = (d.basepoint == cplx(0)) ? cplx(1e6) : cplx(1) / d.basepoint;
    return out;
}

} // namespace cmcface
