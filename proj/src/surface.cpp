#include "cmcface/surface.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace cmcface {

namespace {

MinkowskiPoint hermitian_to_vec(const Mat2C& X) {
    const Mat2C sym = (X + X.adjoint()) * cplx(0.5); // project out roundoff skew
    return matrix_to_vec(sym, 1.0);
}

} // namespace

SurfaceSample immerse(const FrameState& s, const WeierstrassData& d,
                      double singular_tol, cplx dz_du, cplx dz_dv) {
    SurfaceSample out;
    out.z = s.z;
    out.F = s.F;
    const Mat2C& F = s.F;
    const Mat2C Fs = F.adjoint();
    out.f = hermitian_to_vec(F * e3() * Fs);
    out.fhat = hermitian_to_vec(F * Fs);
    out.metric = metric_at(d, s.z, s.branch, singular_tol);

    const cplx g = s.branch.eval(d.g);
    const cplx w = s.branch.eval(d.omega);
    const double ag2 = std::norm(g);

    // normal (future pointing); undefined on the singular set
    if (!out.metric.singular) {
        const Mat2C M{cplx(ag2 + 1.0), 2.0 * g, 2.0 * std::conj(g), cplx(ag2 + 1.0)};
        MinkowskiPoint n = hermitian_to_vec(F * M * Fs) * (1.0 / (ag2 - 1.0));
        if (n.x0 < 0) n = -n;
        out.normal = n;
        out.normal_defined = true;
    }

    // exact tangents: d(F e3 F*) = F(A w e3 dz + (A w e3 dz)*) F*
    const Mat2C Awe3 = Mat2C{g, -g * g, 1, -g} * w * e3();
    const auto tangent = [&](cplx dz) {
        const Mat2C T = Awe3 * dz;
        return hermitian_to_vec(F * (T + T.adjoint()) * Fs);
    };
    out.df_du = tangent(dz_du);
    out.df_dv = tangent(dz_dv);

    out.hollow = hollow_ball_project(out.f, 1e-5);
    out.ok = true;
    return out;
}

std::array<double, 3> hollow_ball_project(const MinkowskiPoint& x, double tol) {
    const double norm2 = x.x0 * x.x0 + x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3;
    if (std::abs(lorentz_inner(x, x) - 1.0) > tol * (1.0 + norm2))
        throw NotOnDeSitter("hollow_ball_project: point is not on the de Sitter sphere");
    const double factor = std::exp(std::atan(x.x0)) / std::sqrt(1.0 + x.x0 * x.x0);
    return {factor * x.x1, factor * x.x2, factor * x.x3};
}

cplx GridRegion::map(double u, double v) const {
    if (chart == Chart::Cartesian) return cplx(u, v);
    return std::exp(cplx(u, v));
}

cplx GridRegion::chart_du(double u, double v) const {
    if (chart == Chart::Cartesian) return cplx(1, 0);
    return std::exp(cplx(u, v)); // dz/du; dz/dv = i * dz/du
}

namespace {

// Chart-straight path between chart points, emitted as a z-space polyline.
PathSpec chart_path(const GridRegion& region, double ua, double va, double ub,
                    double vb) {
    const double dist = std::hypot(ub - ua, vb - va);
    const int n = std::max(16, static_cast<int>(std::ceil(8.0 * dist)));
    std::vector<cplx> pts;
    pts.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = double(k) / n;
        pts.push_back(region.map(ua + t * (ub - ua), va + t * (vb - va)));
    }
    return PathSpec::polyline(pts);
}

// Exact path of one grid edge (chart-aligned edges map to lines/arcs).
PathSpec edge_path(const GridRegion& region, double ua, double va, double ub,
                   double vb) {
    if (region.chart == Chart::Cartesian)
        return PathSpec::line(cplx(ua, va), cplx(ub, vb));
    if (va == vb) // radial segment
        return PathSpec::line(region.map(ua, va), region.map(ub, vb));
    if (ua == ub) { // circular arc about the origin
        PathSpec p;
        p.append(PathSegment::arc(cplx(0), std::exp(ua), va, vb));
        return p;
    }
    return chart_path(region, ua, va, ub, vb);
}

unsigned thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CMCFACE_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

} // namespace

SampleGrid sample_grid(const WeierstrassData& d, const GridRegion& region,
                       std::size_t nu, std::size_t nv, const IntegratorOptions& opts,
                       unsigned threads) {
    if (region.u1 <= region.u0 || region.v1 <= region.v0 || nu == 0 || nv == 0) {
        SampleGrid empty;
        empty.region = region;
        return empty;
    }
    if (nu < 2 || nv < 2) throw ValidationError("sample_grid: resolution must be >= 2");
    SampleGrid grid;
    grid.region = region;
    grid.nu = nu;
    grid.nv = nv;
    grid.samples.assign(nu * nv, SurfaceSample{});

    const double du = (region.u1 - region.u0) / double(nu - 1);
    const double dv = (region.v1 - region.v0) / double(nv - 1);

    // basepoint -> node(0,0) hop, then the column spine iu = 0
    double ub, vb;
    if (region.chart == Chart::Cartesian) {
        ub = d.basepoint.real();
        vb = d.basepoint.imag();
    } else {
        ub = std::log(std::abs(d.basepoint));
        vb = std::arg(d.basepoint);
    }

    std::vector<FrameState> spine(nv);
    std::mutex mtx;
    std::size_t spine_ok = 0;
    try {
        FrameState s = frame_start(d, d.basepoint);
        s = integrate_frame(d, chart_path(region, ub, vb, region.u0, region.v0),
                            std::move(s), opts, &grid.stats);
        spine[0] = s;
        spine_ok = 1;
        for (std::size_t iv = 1; iv < nv; ++iv) {
            const double v0 = region.v0 + (iv - 1) * dv;
            s = integrate_frame(d, edge_path(region, region.u0, v0, region.u0, v0 + dv),
                                std::move(s), opts, &grid.stats);
            spine[iv] = s;
            spine_ok = iv + 1;
        }
    } catch (const Error&) {
        // rows without a spine state are recorded as failures below
    }

    std::atomic<std::size_t> next_row{0};
    auto row_worker = [&]() {
        IntegrationStats local;
        std::vector<std::pair<std::size_t, std::size_t>> failed;
        for (;;) {
            const std::size_t iv = next_row.fetch_add(1);
            if (iv >= nv) break;
            const double v = region.v0 + iv * dv;
            if (iv >= spine_ok) {
                for (std::size_t iu = 0; iu < nu; ++iu) failed.emplace_back(iu, iv);
                continue;
            }
            FrameState s = spine[iv];
            std::size_t iu = 0;
            try {
                const cplx cdu = grid.region.chart_du(region.u0, v);
                grid.at(0, iv) = immerse(s, d, 1e-3, cdu, cdu * cplx(0, 1));
                for (iu = 1; iu < nu; ++iu) {
                    const double ua = region.u0 + (iu - 1) * du;
                    s = integrate_frame(d, edge_path(region, ua, v, ua + du, v),
                                        std::move(s), opts, &local);
                    const cplx cd = grid.region.chart_du(ua + du, v);
                    grid.at(iu, iv) = immerse(s, d, 1e-3, cd, cd * cplx(0, 1));
                }
            } catch (const Error&) {
                for (std::size_t k = iu; k < nu; ++k) failed.emplace_back(k, iv);
            }
        }
        std::lock_guard<std::mutex> lock(mtx);
        grid.stats.add(local);
        for (auto& f : failed) grid.failures.push_back(f);
    };

    const unsigned nthreads = std::min<unsigned>(thread_count(threads),
                                                 static_cast<unsigned>(nv));
    if (nthreads <= 1) {
        row_worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned k = 0; k < nthreads; ++k) pool.emplace_back(row_worker);
        for (auto& t : pool) t.join();
    }
    return grid;
}

// --- singular curves -------------------------------------------------------

namespace {

double log_abs_g(const WeierstrassData& d, const GridRegion& region, double u, double v) {
    const cplx g = d.g.eval(region.map(u, v));
    double h = std::log(std::abs(g));
    if (!std::isfinite(h)) h = (std::abs(g) > 1.0) ? 1e300 : -1e300;
    if (h == 0.0) h = 1e-300; // break exact-zero nodes toward the + side
    return h;
}

struct CurveVertex {
    double u, v;
};

// Root of log|g| along the chart segment (ua,va)-(ub,vb) by bisection.
CurveVertex refine_vertex(const WeierstrassData& d, const GridRegion& region, double ua,
                          double va, double ha, double ub, double vb) {
    for (int it = 0; it < 80; ++it) {
        const double um = 0.5 * (ua + ub), vm = 0.5 * (va + vb);
        const double hm = log_abs_g(d, region, um, vm);
        if (std::abs(hm) <= 5e-11) return {um, vm};
        if ((hm > 0) == (ha > 0)) {
            ua = um;
            va = vm;
            ha = hm;
        } else {
            ub = um;
            vb = vm;
        }
    }
    return {0.5 * (ua + ub), 0.5 * (va + vb)};
}

} // namespace

std::vector<SingularCurve> singular_curves(const WeierstrassData& d,
                                           const GridRegion& region, std::size_t n,
                                           const IntegratorOptions& opts) {
    if (n < 2) throw ValidationError("singular_curves: grid must be >= 2x2");
    const double du = (region.u1 - region.u0) / double(n - 1);
    const double dv = (region.v1 - region.v0) / double(n - 1);

    std::vector<double> h(n * n);
    for (std::size_t iv = 0; iv < n; ++iv)
        for (std::size_t iu = 0; iu < n; ++iu)
            h[iv * n + iu] =
                log_abs_g(d, region, region.u0 + iu * du, region.v0 + iv * dv);

    // Edge ids: 2*(iv*n + iu) for the horizontal edge from (iu,iv), +1 for
    // the vertical edge.
    const auto hedge = [&](std::size_t iu, std::size_t iv) { return 2 * (iv * n + iu); };
    const auto vedge = [&](std::size_t iu, std::size_t iv) {
        return 2 * (iv * n + iu) + 1;
    };

    std::map<std::size_t, CurveVertex> vertices;
    const auto vertex_on = [&](std::size_t id, std::size_t iua, std::size_t iva,
                               std::size_t iub, std::size_t ivb) {
        if (vertices.count(id)) return;
        const double ua = region.u0 + iua * du, va = region.v0 + iva * dv;
        const double ub = region.u0 + iub * du, vb = region.v0 + ivb * dv;
        vertices[id] = refine_vertex(d, region, ua, va, h[iva * n + iua], ub, vb);
    };

    std::vector<std::pair<std::size_t, std::size_t>> links; // vertex-id pairs
    for (std::size_t iv = 0; iv + 1 < n; ++iv) {
        for (std::size_t iu = 0; iu + 1 < n; ++iu) {
            const double h00 = h[iv * n + iu], h10 = h[iv * n + iu + 1];
            const double h01 = h[(iv + 1) * n + iu], h11 = h[(iv + 1) * n + iu + 1];
            const int config = (h00 > 0 ? 1 : 0) | (h10 > 0 ? 2 : 0) |
                               (h01 > 0 ? 4 : 0) | (h11 > 0 ? 8 : 0);
            if (config == 0 || config == 15) continue;

            const std::size_t bottom = hedge(iu, iv), top = hedge(iu, iv + 1);
            const std::size_t left = vedge(iu, iv), right = vedge(iu + 1, iv);
            const bool cb = (h00 > 0) != (h10 > 0), ct = (h01 > 0) != (h11 > 0);
            const bool cl = (h00 > 0) != (h01 > 0), cr = (h10 > 0) != (h11 > 0);
            if (cb) vertex_on(bottom, iu, iv, iu + 1, iv);
            if (ct) vertex_on(top, iu, iv + 1, iu + 1, iv + 1);
            if (cl) vertex_on(left, iu, iv, iu, iv + 1);
            if (cr) vertex_on(right, iu + 1, iv, iu + 1, iv + 1);

            if (config == 6 || config == 9) {
                // saddle: all four edges cross; pair by the center sample
                const double hc = log_abs_g(d, region, region.u0 + (iu + 0.5) * du,
                                            region.v0 + (iv + 0.5) * dv);
                const bool center_pos = hc > 0;
                const bool corner00_pos = h00 > 0;
                if (center_pos == corner00_pos) {
                    links.emplace_back(bottom, right);
                    links.emplace_back(top, left);
                } else {
                    links.emplace_back(bottom, left);
                    links.emplace_back(top, right);
                }
                continue;
            }
            std::vector<std::size_t> cross;
            if (cb) cross.push_back(bottom);
            if (cr) cross.push_back(right);
            if (ct) cross.push_back(top);
            if (cl) cross.push_back(left);
            if (cross.size() == 2) links.emplace_back(cross[0], cross[1]);
        }
    }

    // chain the segments into polylines
    std::map<std::size_t, std::vector<std::size_t>> adj; // vertex id -> link idx
    for (std::size_t k = 0; k < links.size(); ++k) {
        adj[links[k].first].push_back(k);
        adj[links[k].second].push_back(k);
    }
    std::vector<bool> used(links.size(), false);
    std::vector<std::vector<std::size_t>> chains;
    for (std::size_t k = 0; k < links.size(); ++k) {
        if (used[k]) continue;
        std::vector<std::size_t> chain{links[k].first, links[k].second};
        used[k] = true;
        for (int dir = 0; dir < 2; ++dir) {
            for (;;) {
                const std::size_t tail = (dir == 0) ? chain.back() : chain.front();
                std::size_t next_link = static_cast<std::size_t>(-1);
                for (std::size_t li : adj[tail])
                    if (!used[li]) next_link = li;
                if (next_link == static_cast<std::size_t>(-1)) break;
                used[next_link] = true;
                const auto& l = links[next_link];
                const std::size_t other = (l.first == tail) ? l.second : l.first;
                if (dir == 0)
                    chain.push_back(other);
                else
                    chain.insert(chain.begin(), other);
                if (other == ((dir == 0) ? chain.front() : chain.back())) break;
            }
        }
        chains.push_back(std::move(chain));
    }

    std::vector<SingularCurve> curves;
    for (const auto& chain : chains) {
        SingularCurve c;
        c.closed = chain.size() > 2 && chain.front() == chain.back();
        std::vector<CurveVertex> cv;
        for (std::size_t id : chain) {
            const auto& v = vertices.at(id);
            cv.push_back(v);
            c.domain.push_back(region.map(v.u, v.v));
        }
        // hollow-ball image by integrating the frame along the curve
        try {
            double ub, vb;
            if (region.chart == Chart::Cartesian) {
                ub = d.basepoint.real();
                vb = d.basepoint.imag();
            } else {
                ub = std::log(std::abs(d.basepoint));
                vb = std::arg(d.basepoint);
            }
            FrameState s = frame_start(d, d.basepoint);
            s = integrate_frame(d, chart_path(region, ub, vb, cv[0].u, cv[0].v),
                                std::move(s), opts);
            c.hollow.push_back(immerse(s, d).hollow);
            for (std::size_t k = 1; k < cv.size(); ++k) {
                s = integrate_frame(
                    d, chart_path(region, cv[k - 1].u, cv[k - 1].v, cv[k].u, cv[k].v),
                    std::move(s), opts);
                c.hollow.push_back(immerse(s, d).hollow);
            }
        } catch (const Error&) {
            c.hollow.clear(); // curve kept; image unavailable
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

double mean_curvature_probe(const SampleGrid& grid, std::size_t iu, std::size_t iv) {
    if (iu < 1 || iv < 1 || iu + 1 >= grid.nu || iv + 1 >= grid.nv)
        throw InsufficientStencil("mean_curvature_probe: node is on the boundary");
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
            const auto& s = grid.at(iu + di, iv + dj);
            if (!s.ok || s.metric.singular)
                throw InsufficientStencil(
                    "mean_curvature_probe: stencil touches a failed or singular sample");
        }
    const auto& c = grid.at(iu, iv);
    if (!c.normal_defined)
        throw InsufficientStencil("mean_curvature_probe: normal undefined at the node");

    const double hu = grid.du(), hv = grid.dv();
    const auto f = [&](int di, int dj) { return grid.at(iu + di, iv + dj).f; };

    const MinkowskiPoint fu = (f(1, 0) - f(-1, 0)) * (0.5 / hu);
    const MinkowskiPoint fv = (f(0, 1) - f(0, -1)) * (0.5 / hv);
    const MinkowskiPoint fuu = (f(1, 0) - f(0, 0) * 2.0 + f(-1, 0)) * (1.0 / (hu * hu));
    const MinkowskiPoint fvv = (f(0, 1) - f(0, 0) * 2.0 + f(0, -1)) * (1.0 / (hv * hv));
    const MinkowskiPoint fuv =
        (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) * (0.25 / (hu * hv));

    const double g11 = lorentz_inner(fu, fu);
    const double g12 = lorentz_inner(fu, fv);
    const double g22 = lorentz_inner(fv, fv);
    // contract against the normal oriented as in the representation (the
    // reported normal is future pointing, which flips the co-orientation
    // on the |g| < 1 sheet)
    const double s = (c.metric.abs_g > 1.0) ? 1.0 : -1.0;
    const double b11 = s * lorentz_inner(fuu, c.normal);
    const double b12 = s * lorentz_inner(fuv, c.normal);
    const double b22 = s * lorentz_inner(fvv, c.normal);
    const double det = g11 * g22 - g12 * g12;
    if (det <= 0)
        throw InsufficientStencil("mean_curvature_probe: degenerate first fundamental form");
    return (g22 * b11 - 2.0 * g12 * b12 + g11 * b22) / (2.0 * det);
}

} // namespace cmcface
