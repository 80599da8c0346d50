#include "cmcface/frame.hpp"

#include <algorithm>
#include <cmath>

namespace cmcface {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Right-hand side F * A(z) w(z) zdot at one point of a segment.  The
// branch state is cloned from the step base and advanced to the stage
// parameter; the coefficient matrix is null (det = 0) by construction.
struct Rhs {
    const WeierstrassData& d;
    const PathSegment& seg;
    const BranchState& base_state;
    double base_t;

    Mat2C operator()(double t, const Mat2C& F, cplx* g_out = nullptr,
                     cplx* wz_out = nullptr) const {
        BranchState st = base_state;
        st.advance(seg, base_t, t);
        const cplx g = st.eval(d.g);
        const cplx w = st.eval(d.omega);
        if (!finite(g) || !finite(w))
            throw SingularityOnPath("frame ODE coefficient is singular on the path");
        const cplx wz = w * seg.velocity(t);
        if (g_out) *g_out = g;
        if (wz_out) *wz_out = wz;
        const Mat2C A{g, -g * g, 1, -g};
        return F * A * wz;
    }
};

double error_norm(const Mat2C& err, const Mat2C& y0, const Mat2C& y1, double atol,
                  double rtol) {
    const auto scale = [&](cplx e, cplx a, cplx b) {
        const double sc = atol + rtol * std::max(std::abs(a), std::abs(b));
        return std::abs(e) / sc;
    };
    return std::max(std::max(scale(err.a11, y0.a11, y1.a11), scale(err.a12, y0.a12, y1.a12)),
                    std::max(scale(err.a21, y0.a21, y1.a21), scale(err.a22, y0.a22, y1.a22)));
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double er1 = 71.0 / 57600, er3 = -71.0 / 16695, er4 = 71.0 / 1920,
                 er5 = -17253.0 / 339200, er6 = 22.0 / 525, er7 = -1.0 / 40;

void integrate_segment(const WeierstrassData& d, const PathSegment& seg, FrameState& s,
                       const IntegratorOptions& opts, IntegrationStats& stats) {
    double t = 0.0;
    double h = 0.05;
    double err_prev = 1.0;
    bool have_k1 = false;
    Mat2C k1;

    while (t < 1.0) {
        h = std::min(h, 1.0 - t);
        if (h < 1e-14)
            throw ToleranceNotMet("frame integration: step size underflow");

        const Rhs rhs{d, seg, s.branch, t};
        cplx g1{}, wz1{};
        const bool fresh_coeff = !have_k1;
        if (!have_k1) k1 = rhs(t, s.F, &g1, &wz1);

        const Mat2C& y = s.F;
        const Mat2C k2 = rhs(t + c2 * h, y + k1 * cplx(a21 * h));
        const Mat2C k3 = rhs(t + c3 * h, y + (k1 * cplx(a31) + k2 * cplx(a32)) * cplx(h));
        const Mat2C k4 = rhs(t + c4 * h,
                             y + (k1 * cplx(a41) + k2 * cplx(a42) + k3 * cplx(a43)) * cplx(h));
        const Mat2C k5 = rhs(t + c5 * h, y + (k1 * cplx(a51) + k2 * cplx(a52) +
                                              k3 * cplx(a53) + k4 * cplx(a54)) *
                                                 cplx(h));
        const Mat2C k6 = rhs(t + h, y + (k1 * cplx(a61) + k2 * cplx(a62) + k3 * cplx(a63) +
                                         k4 * cplx(a64) + k5 * cplx(a65)) *
                                            cplx(h));
        const Mat2C y5 = y + (k1 * cplx(b1) + k3 * cplx(b3) + k4 * cplx(b4) +
                              k5 * cplx(b5) + k6 * cplx(b6)) *
                                 cplx(h);
        const Mat2C k7 = rhs(t + h, y5);
        const Mat2C err = (k1 * cplx(er1) + k3 * cplx(er3) + k4 * cplx(er4) +
                           k5 * cplx(er5) + k6 * cplx(er6) + k7 * cplx(er7)) *
                          cplx(h);

        const double err_n = error_norm(err, y, y5, opts.abs_tol, opts.rel_tol);
        if (err_n <= 1.0) {
            // accept: advance the committed branch state and renormalize det
            s.branch.advance(seg, t, t + h);
            s.F = y5;
            s.z = seg.point(t + h);
            t += h;
            ++stats.accepted;
            k1 = k7;
            have_k1 = true;

            const cplx det = s.F.det();
            if (std::abs(det - cplx(1)) > opts.det_repair_threshold) {
                s.F = s.F * (cplx(1) / std::sqrt(det));
                ++stats.det_repairs;
            }

            // null-condition sanity: a1^2 + a2 a3 = 0 for the coefficient
            if (fresh_coeff) {
                const cplx a1 = g1 * wz1, a2 = -g1 * g1 * wz1, a3 = wz1;
                const double resid = std::abs(a1 * a1 + a2 * a3);
                const double scale = std::norm(a1) + std::abs(a2) * std::abs(a3) + 1e-300;
                if (resid > 1e-8 * scale)
                    throw Error("frame ODE coefficient lost the null condition");
            }

            const double fac = 0.9 * std::pow(err_n + 1e-30, -0.7 / 5.0) *
                               std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err_n, 1e-4);
        } else {
            ++stats.rejected;
            have_k1 = false;
            h *= std::clamp(0.9 * std::pow(err_n, -0.2), 0.1, 0.9);
        }
    }
}

} // namespace

FrameState frame_start(const WeierstrassData& d, cplx z0) {
    FrameState s;
    s.z = z0;
    s.branch = d.branch_at(z0);
    s.F = Mat2C::identity();
    return s;
}

FrameState integrate_frame(const WeierstrassData& d, const PathSpec& path,
                           FrameState start, const IntegratorOptions& opts,
                           IntegrationStats* stats) {
    if (path.empty()) return start;
    if (std::abs(path.start() - start.z) > 1e-9 * (1.0 + std::abs(start.z)))
        throw Error("integrate_frame: path does not start at the state's point");
    path.check_clearance(d.punctures, opts.clearance);

    IntegrationStats local;
    for (const auto& seg : path.segments())
        integrate_segment(d, seg, start, opts, local);
    if (stats) stats->add(local);
    return start;
}

Mat2C monodromy_loop(const WeierstrassData& d, const PathSpec& loop,
                     const IntegratorOptions& opts, IntegrationStats* stats) {
    if (!loop.is_closed(1e-9))
        throw Error("monodromy_loop: path is not closed");
    FrameState s = frame_start(d, loop.start());
    s = integrate_frame(d, loop, std::move(s), opts, stats);
    return s.F;
}

std::array<cplx, 2> eigenvalues_sl2(const Mat2C& M) {
    const cplx t = M.trace();
    const cplx disc = std::sqrt(t * t - cplx(4));
    cplx l1 = (t + disc) / cplx(2), l2 = (t - disc) / cplx(2);
    const auto key = [](cplx v) {
        double a = std::arg(v);
        if (a < 0) a += 2.0 * M_PI;
        return a;
    };
    if (key(l1) > key(l2)) std::swap(l1, l2);
    return {l1, l2};
}

MonodromyResult classify_monodromy(const Mat2C& Phi, const IntegratorOptions& opts) {
    MonodromyResult r;
    r.Phi = Phi;
    r.su11_residual = max_norm_diff(Phi * e3() * Phi.adjoint(), e3());
    if (r.su11_residual > opts.su11_gate ||
        std::abs(Phi.det() - cplx(1)) > opts.su11_gate)
        throw NotSU11("monodromy matrix is not in SU(1,1)", r.su11_residual);
    r.classification = classify_su11(Phi, opts.class_tol);
    r.eigenvalues = eigenvalues_sl2(Phi);
    return r;
}

MonodromyResult monodromy(const WeierstrassData& d, const Puncture& about,
                          double radius, const IntegratorOptions& opts,
                          IntegrationStats* stats) {
    if (!(radius > 0)) throw Error("monodromy: radius must be positive");
    // The loop is short, so integrate it tighter than the user tolerance:
    // conjugacy classification (in particular the +-identity test) needs
    // the matrix itself accurate, not just its eigenvalues.
    IntegratorOptions tight = opts;
    tight.rel_tol = std::min(opts.rel_tol, 1e-12);
    tight.abs_tol = std::min(opts.abs_tol, 1e-13);
    if (about.infinite) {
        const WeierstrassData dw = invert_chart(d);
        const PathSpec loop = PathSpec::circle(cplx(0), radius);
        return classify_monodromy(monodromy_loop(dw, loop, tight, stats), opts);
    }
    const PathSpec loop = PathSpec::circle(about.z, radius);
    return classify_monodromy(monodromy_loop(d, loop, tight, stats), opts);
}

cplx hyperbolic_gauss_at(const FrameState& s, const WeierstrassData& d) {
    const cplx g = s.branch.eval(d.g);
    const cplx num = g * s.F.a11 + s.F.a12;
    const cplx den = g * s.F.a21 + s.F.a22;
    if (std::abs(den) < 1e-280 * (1.0 + std::abs(num)))
        return cplx(std::numeric_limits<double>::infinity(), 0);
    return num / den;
}

} // namespace cmcface
