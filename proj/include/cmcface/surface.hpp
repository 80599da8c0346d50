#ifndef CMCFACE_SURFACE_HPP
#define CMCFACE_SURFACE_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "cmcface/frame.hpp"

namespace cmcface {

/// One evaluated point of the immersion: f = F e3 F* on the de Sitter
/// sphere, the dual fhat = F F* in H^3, the future-pointing unit normal
/// (omitted on the singular set |g| = 1), metric data and the hollow-ball
/// image of f.
struct SurfaceSample {
    cplx z{};
    Mat2C F = Mat2C::identity();
    MinkowskiPoint f{}, fhat{}, normal{};
    bool normal_defined = false;
    MetricSample metric{};
    std::array<double, 3> hollow{};
    bool ok = false;

    // Exact tangents from the representation: df = F(A w e3) F* dz + h.c.
    MinkowskiPoint df_du{}, df_dv{}; // with respect to the grid chart coords
};

/// dz_du / dz_dv are the chart derivatives used for the exact tangents
/// (defaults: the identity chart directions 1 and i).
SurfaceSample immerse(const FrameState& s, const WeierstrassData& d,
                      double singular_tol = 1e-3, cplx dz_du = cplx(1),
                      cplx dz_dv = cplx(0, 1));

/// Hollow-ball model coordinates y_k = e^{arctan x0}/sqrt(1+x0^2) * x_k.
/// The image satisfies e^{-pi} < |y|^2 < e^{pi} strictly.
std::array<double, 3> hollow_ball_project(const MinkowskiPoint& x, double tol = 1e-6);

/// Grid chart over the domain: Cartesian z = u + iv, or the log-polar
/// cover chart z = exp(u + iv) for punctured domains (v unbounded).
enum class Chart { Cartesian, LogPolar };

struct GridRegion {
    Chart chart = Chart::Cartesian;
    double u0 = -1, u1 = 1, v0 = -1, v1 = 1;

    cplx map(double u, double v) const;
    /// dz/du and dz/dv at (u,v) (complex chart derivatives).
    cplx chart_du(double u, double v) const;
};

struct SampleGrid {
    GridRegion region;
    std::size_t nu = 0, nv = 0;
    std::vector<SurfaceSample> samples; // row-major: index iv*nu + iu
    std::vector<std::pair<std::size_t, std::size_t>> failures;
    IntegrationStats stats;

    SurfaceSample& at(std::size_t iu, std::size_t iv) { return samples[iv * nu + iu]; }
    const SurfaceSample& at(std::size_t iu, std::size_t iv) const {
        return samples[iv * nu + iu];
    }
    double du() const { return nu > 1 ? (region.u1 - region.u0) / double(nu - 1) : 0.0; }
    double dv() const { return nv > 1 ? (region.v1 - region.v0) / double(nv - 1) : 0.0; }
};

/// Fill an nu x nv grid over the region: the frame is integrated from the
/// data's basepoint along a spanning tree of grid edges (one column spine,
/// then row-major marches), so adjacent samples are branch-consistent.
/// Integration failures are recorded per node; the grid is still returned.
/// threads = 0 uses CMCFACE_THREADS or the hardware concurrency.
SampleGrid sample_grid(const WeierstrassData& d, const GridRegion& region,
                       std::size_t nu, std::size_t nv,
                       const IntegratorOptions& opts = {}, unsigned threads = 0);

/// Connected component of the singular set |g| = 1, as an ordered polyline
/// in domain coordinates plus its hollow-ball image.
struct SingularCurve {
    std::vector<cplx> domain;
    std::vector<std::array<double, 3>> hollow;
    bool closed = false;
};

/// Marching squares on log|g| over an n x n node grid, each vertex refined
/// by bisection to ||g|-1| <= 1e-10.
std::vector<SingularCurve> singular_curves(const WeierstrassData& d,
                                           const GridRegion& region, std::size_t n,
                                           const IntegratorOptions& opts = {});

/// Finite-difference mean-curvature estimate at an interior grid node from
/// the 3x3 stencil around it; expected ~ 1.  Throws InsufficientStencil
/// when the stencil touches failed or singular samples or the boundary.
double mean_curvature_probe(const SampleGrid& grid, std::size_t iu, std::size_t iv);

} // namespace cmcface

#endif // CMCFACE_SURFACE_HPP
