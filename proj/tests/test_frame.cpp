#include <doctest.h>

#include <random>

#include "cmcface/frame.hpp"

using namespace cmcface;

namespace {

// closed-form frame of the horosphere family: A is nilpotent, so
// F(z) = I + c2 z A with A = [[c1, -c1^2], [1, -c1]]
Mat2C horosphere_frame(double c1, double c2, cplx z) {
    const Mat2C A{c1, -c1 * c1, 1, -c1};
    return Mat2C::identity() + A * (c2 * z);
}

} // namespace

TEST_CASE("horosphere frame matches the nilpotent closed form") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(-2, 2);

    for (const auto& [c1, c2] : std::vector<std::pair<double, double>>{
             {0.0, 1.0}, {1.2, 1.0}, {0.4, -0.7}}) {
        const WeierstrassData d = make_example(ExampleFamily::Horosphere, {c1, c2});
        for (int k = 0; k < 50; ++k) {
            const cplx z(u(rng), u(rng));
            FrameState s = frame_start(d, cplx(0));
            s = integrate_frame(d, PathSpec::line(cplx(0), z), std::move(s));
            const Mat2C expect = horosphere_frame(c1, c2, z);
            CHECK(max_norm_diff(s.F, expect) < 1e-9);
            CHECK(std::abs(s.F.det() - cplx(1)) < 1e-12);
        }
    }
}

TEST_CASE("catenoid frame matches the power-solution closed form") {
    // rows (z^p, (p/C - 1) z^{p+mu}) solve the frame ODE for the catenoid
    // data with p = (1 -+ mu)/2, C = (1-mu^2)/(4 mu); the normalized frame
    // is V(z0)^{-1} V(z)
    const double mu = 0.8;
    const double C = (1 - mu * mu) / (4 * mu);
    const double p1 = (1 - mu) / 2, p2 = -(1 + mu) / 2;
    const auto V = [&](cplx z) {
        const auto row = [&](double p) {
            return std::array<cplx, 2>{std::pow(z, cplx(p)),
                                       (p / C - 1.0) * std::pow(z, cplx(p + mu))};
        };
        const auto r1 = row(p1), r2 = row(p2);
        return Mat2C{r1[0], r1[1], r2[0], r2[1]};
    };

    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {mu});
    const cplx z0 = d.basepoint;
    const Mat2C V0inv = V(z0).inverse();

    std::mt19937 rng(61);
    std::uniform_real_distribution<double> rad(0.3, 3.0), ang(-2.0, 2.0);
    for (int k = 0; k < 25; ++k) {
        // targets reachable from z0 = 2 without crossing the principal cut
        const cplx z = std::polar(rad(rng), ang(rng));
        FrameState s = frame_start(d, z0);
        s = integrate_frame(d, PathSpec::line(z0, z), std::move(s));
        const Mat2C expect = V0inv * V(z);
        CHECK(max_norm_diff(s.F, expect) < 1e-8);
    }
}

TEST_CASE("empty path returns the start state") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    FrameState s = frame_start(d, d.basepoint);
    const FrameState out = integrate_frame(d, PathSpec{}, s);
    CHECK(max_norm_diff(out.F, s.F) == 0.0);
    CHECK(out.z == s.z);
}

TEST_CASE("unimodularity along a long path") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {1.2});
    IntegrationStats stats;
    FrameState s = frame_start(d, d.basepoint);
    PathSpec path;
    path.append(PathSegment::line(cplx(2), cplx(0.1, 1.5)));
    path.append(PathSegment::arc(cplx(0), std::abs(cplx(0.1, 1.5)), std::arg(cplx(0.1, 1.5)),
                                 std::arg(cplx(0.1, 1.5)) + 3 * M_PI));
    s = integrate_frame(d, path, std::move(s), {}, &stats);
    CHECK(std::abs(s.F.det() - cplx(1)) <= 1e-9);
    CHECK(stats.accepted > 0);
}

TEST_CASE("homotopy invariance: straight line vs square detour") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    const cplx a(2, 0), b(0.3, 1.1);

    FrameState s1 = frame_start(d, a);
    s1 = integrate_frame(d, PathSpec::line(a, b), std::move(s1));

    FrameState s2 = frame_start(d, a);
    const std::vector<cplx> detour = {a, cplx(2, 2.5), cplx(-0.5, 2.5), b};
    s2 = integrate_frame(d, PathSpec::polyline(detour), std::move(s2));

    CHECK(max_norm_diff(s1.F, s2.F) < 1e-8);
}

TEST_CASE("catenoid monodromy eigenvalues are -e^{+-mu pi i}") {
    for (const double mu : {0.8, 1.2}) {
        const WeierstrassData d = make_example(ExampleFamily::Catenoid, {mu});
        const MonodromyResult m = monodromy(d, Puncture::at(0), 0.5);
        CHECK(m.su11_residual <= 1e-8);
        CHECK(m.classification.tag == Su11Tag::Elliptic);

        const cplx lam1 = -std::exp(cplx(0, mu * M_PI));
        const cplx lam2 = -std::exp(cplx(0, -mu * M_PI));
        const double err = std::min(
            std::max(std::abs(m.eigenvalues[0] - lam1), std::abs(m.eigenvalues[1] - lam2)),
            std::max(std::abs(m.eigenvalues[0] - lam2), std::abs(m.eigenvalues[1] - lam1)));
        CHECK(err <= 1e-6);
    }
}

TEST_CASE("monodromy is radius independent up to conjugacy") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    const MonodromyResult a = monodromy(d, Puncture::at(0), 0.3);
    const MonodromyResult b = monodromy(d, Puncture::at(0), 0.7);
    CHECK(std::abs(a.eigenvalues[0] - b.eigenvalues[0]) < 1e-8);
    CHECK(std::abs(a.eigenvalues[1] - b.eigenvalues[1]) < 1e-8);
    CHECK(a.classification.tag == b.classification.tag);
}

TEST_CASE("monodromy at the end at infinity") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    const MonodromyResult m = monodromy(d, Puncture::inf(), 0.5);
    CHECK(m.su11_residual <= 1e-8);
    CHECK(m.classification.tag == Su11Tag::Elliptic);
    // same eigenvalue set as the end at 0
    const cplx lam = -std::exp(cplx(0, 0.8 * M_PI));
    const double err = std::min(std::abs(m.eigenvalues[0] - lam),
                                std::abs(m.eigenvalues[1] - lam));
    CHECK(err <= 1e-6);
}

TEST_CASE("horosphere loops have trivial monodromy") {
    const WeierstrassData d = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    const Mat2C Phi = monodromy_loop(d, PathSpec::circle(cplx(0.3, 0.1), 1.0));
    CHECK(max_norm_diff(Phi, Mat2C::identity()) < 1e-10);
    const MonodromyResult m = classify_monodromy(Phi);
    CHECK(m.classification.tag == Su11Tag::CenterPM);
}

TEST_CASE("monodromy representation property on concatenated loops") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    const cplx base(2, 0);

    // gamma1: loop around 0; gamma2: loop around infinity (clockwise big
    // circle); both based at z = 2
    PathSpec g1 = PathSpec::line(base, cplx(0.5, 0));
    g1.append(PathSpec::circle(cplx(0), 0.5));
    g1.append(PathSpec::line(cplx(0.5, 0), base));

    PathSpec g2 = PathSpec::line(base, cplx(3, 0));
    g2.append(PathSpec::circle(cplx(0), 3.0, -1));
    g2.append(PathSpec::line(cplx(3, 0), base));

    const Mat2C p1 = monodromy_loop(d, g1);
    const Mat2C p2 = monodromy_loop(d, g2);

    PathSpec g12 = g1;
    g12.append(g2);
    const Mat2C p12 = monodromy_loop(d, g12);
    CHECK(max_norm_diff(p12, p1 * p2) < 1e-8);

    // double loop
    PathSpec g11 = g1;
    g11.append(g1);
    const Mat2C p11 = monodromy_loop(d, g11);
    CHECK(max_norm_diff(p11, p1 * p1) < 1e-8);

    // gamma1 gamma2 is null-homotopic in C \ {0}
    CHECK(max_norm_diff(p12, Mat2C::identity()) < 1e-8);
}

TEST_CASE("hyperbolic Gauss map values") {
    const WeierstrassData hor = make_example(ExampleFamily::Horosphere, {0.0, 1.0});
    FrameState s = frame_start(hor, cplx(0));
    s = integrate_frame(hor, PathSpec::line(cplx(0), cplx(1.3, 0.4)), std::move(s));
    CHECK(std::abs(hyperbolic_gauss_at(s, hor)) < 1e-12); // G == c1 == 0

    const WeierstrassData hor2 = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    FrameState s2 = frame_start(hor2, cplx(0));
    s2 = integrate_frame(hor2, PathSpec::line(cplx(0), cplx(-0.7, 0.9)), std::move(s2));
    CHECK(std::abs(hyperbolic_gauss_at(s2, hor2) - cplx(1.2)) < 1e-10);

    // at the basepoint F = I, so G = g(z0)
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    FrameState s3 = frame_start(cat, cat.basepoint);
    CHECK(std::abs(hyperbolic_gauss_at(s3, cat) - cat.g.eval(cat.basepoint)) < 1e-14);
}

TEST_CASE("Schwarzian identity 2q = S(g) - S(G) with finite differences") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    IntegratorOptions opts;
    opts.rel_tol = 1e-13;
    opts.abs_tol = 1e-14;

    const auto gauss_at = [&](cplx z) {
        FrameState s = frame_start(cat, cat.basepoint);
        s = integrate_frame(cat, PathSpec::line(cat.basepoint, z), std::move(s), opts);
        return hyperbolic_gauss_at(s, cat);
    };
    const auto S_fd = [&](cplx z, double h) {
        cplx v[7];
        for (int k = -3; k <= 3; ++k) v[k + 3] = gauss_at(z + cplx(k * h));
        const cplx G1 = (-v[5] + 8.0 * v[4] - 8.0 * v[2] + v[1]) / cplx(12 * h);
        const cplx G2 =
            (-v[5] + 16.0 * v[4] - 30.0 * v[3] + 16.0 * v[2] - v[1]) / cplx(12 * h * h);
        const cplx G3 = (v[0] / 8.0 - v[1] + 13.0 * v[2] / 8.0 - 13.0 * v[4] / 8.0 +
                         v[5] - v[6] / 8.0) /
                        cplx(h * h * h);
        const cplx r = G2 / G1;
        return G3 / G1 - 1.5 * r * r;
    };

    const Expr Sg = schwarzian(cat.g);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> rad(0.9, 2.2), ang(-2.4, 2.4);
    for (int k = 0; k < 10; ++k) {
        const cplx z = std::polar(rad(rng), ang(rng));
        const cplx qv = cat.hopf.eval(z);
        const cplx lhs = 2.0 * qv;
        const cplx rhs = Sg.eval(z) - S_fd(z, 0.02);
        CHECK(std::abs(lhs - rhs) / std::abs(qv) <= 1e-5);
    }
}

TEST_CASE("non-descending data fails the SU(1,1) monodromy gate") {
    // mu + nu = -0.1 is not an integer, so the loop matrix around 0 is not
    // SU(1,1)-conjugate and the gate must fire with the residual attached
    const Expr g = pow_expr(Expr::var(), 0.8);
    const Expr w = pow_expr(Expr::var(), -0.9);
    const WeierstrassData d = make_weierstrass(g, w, {Puncture::at(0)}, cplx(2));
    try {
        monodromy(d, Puncture::at(0), 0.5);
        FAIL("expected NotSU11");
    } catch (const NotSU11& e) {
        CHECK(e.residual > 1e-6);
    }
}

TEST_CASE("integration rejects paths through punctures") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    FrameState s = frame_start(d, d.basepoint);
    CHECK_THROWS_AS(integrate_frame(d, PathSpec::line(cplx(2), cplx(-2)), std::move(s)),
                    SingularityOnPath);
}
