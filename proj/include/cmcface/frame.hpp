#ifndef CMCFACE_FRAME_HPP
#define CMCFACE_FRAME_HPP

#include <array>

#include "cmcface/lorentz.hpp"
#include "cmcface/weierstrass.hpp"

namespace cmcface {

/// Solution state of the frame ODE  dF = F [[g,-g^2],[1,-g]] w dz  along a
/// path: current point, branch state of the data there, and F in SL(2,C).
struct FrameState {
    cplx z{};
    BranchState branch;
    Mat2C F = Mat2C::identity();
};

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long det_repairs = 0;

    void add(const IntegrationStats& o) {
        accepted += o.accepted;
        rejected += o.rejected;
        det_repairs += o.det_repairs;
    }
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double det_repair_threshold = 1e-12;
    double clearance = 1e-6;     // minimum path distance from punctures
    double su11_gate = 1e-6;     // monodromy SU(1,1) residual gate
    double class_tol = 1e-9;     // trace tolerance for classification
};

/// F = identity with principal branches at z0 (normally the basepoint).
FrameState frame_start(const WeierstrassData& d, cplx z0);

/// Integrate the frame ODE along the path with an adaptive embedded
/// Runge-Kutta 5(4) pair (Dormand-Prince, PI step control).  det F is
/// renormalized by its principal square root whenever the drift exceeds
/// the repair threshold.
FrameState integrate_frame(const WeierstrassData& d, const PathSpec& path,
                           FrameState start, const IntegratorOptions& opts = {},
                           IntegrationStats* stats = nullptr);

struct MonodromyResult {
    Mat2C Phi;
    Su11Class classification;
    std::array<cplx, 2> eigenvalues; // sorted by argument in [0, 2pi)
    double su11_residual = 0;
};

/// F around the given closed loop with F = identity and principal branches
/// at the loop start.
Mat2C monodromy_loop(const WeierstrassData& d, const PathSpec& loop,
                     const IntegratorOptions& opts = {},
                     IntegrationStats* stats = nullptr);

/// Monodromy around a puncture: one counterclockwise circle of the given
/// radius (for the end at infinity, the circle |w| = radius in the chart
/// w = 1/z), starting on the positive real side.  Eigenvalues and the
/// conjugacy class are radius- and start-point-independent.
MonodromyResult monodromy(const WeierstrassData& d, const Puncture& about,
                          double radius, const IntegratorOptions& opts = {},
                          IntegrationStats* stats = nullptr);

/// Classification wrapper used on an already computed loop matrix.
MonodromyResult classify_monodromy(const Mat2C& Phi, const IntegratorOptions& opts = {});

/// Hyperbolic Gauss map G = (g F11 + F12)/(g F21 + F22) = dF11/dF21 at the
/// state's point.  Returns complex infinity when the denominator vanishes.
cplx hyperbolic_gauss_at(const FrameState& s, const WeierstrassData& d);

/// Eigenvalues of an SL(2,C) matrix, sorted by argument in [0, 2pi).
std::array<cplx, 2> eigenvalues_sl2(const Mat2C& M);

} // namespace cmcface

#endif // CMCFACE_FRAME_HPP
