#include <doctest.h>

#include <random>

#include "cmcface/end_analysis.hpp"

using namespace cmcface;

TEST_CASE("Moebius detection via the Schwarzian relation") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    CHECK(acquire_gauss_map(cat).kind == GaussMap::Kind::Mobius);

    const WeierstrassData enn = make_example(ExampleFamily::Enneper, {1.0});
    CHECK(acquire_gauss_map(enn).kind == GaussMap::Kind::None);

    const WeierstrassData hel = make_example(ExampleFamily::Helicoid, {1.0});
    CHECK(acquire_gauss_map(hel).kind == GaussMap::Kind::None);

    const WeierstrassData hor = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    CHECK(acquire_gauss_map(hor).kind == GaussMap::Kind::None);
}

TEST_CASE("catenoid end analysis: regular, elliptic, embedded") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    const GaussMap G = acquire_gauss_map(cat);

    for (const Puncture& p : cat.punctures) {
        const EndAnalysis a = analyze_end(cat, p, G);
        REQUIRE(a.ordQ);
        CHECK(*a.ordQ == doctest::Approx(-2));
        CHECK(a.regular);
        REQUIRE(a.monodromy);
        CHECK(a.monodromy->classification.tag == Su11Tag::Elliptic);
        REQUIRE(a.ordSigma);
        CHECK(*a.ordSigma == doctest::Approx(0));
        REQUIRE(a.ordLift);
        CHECK(*a.ordLift == doctest::Approx(-2));
        REQUIRE(a.embedded);
        CHECK(*a.embedded);
        REQUIRE(a.lift_complete);
        CHECK(*a.lift_complete);
        // Gauss-equation bookkeeping is an arithmetic identity
        CHECK(*a.ordLift + *a.ordSigma == *a.ordQ);
    }
}

TEST_CASE("enneper end is irregular with embeddedness undefined") {
    const WeierstrassData enn = make_example(ExampleFamily::Enneper, {1.0});
    const EndAnalysis a = analyze_end(enn, Puncture::inf());
    REQUIRE(a.ordQ);
    CHECK(*a.ordQ == doctest::Approx(-4));
    CHECK_FALSE(a.regular);
    CHECK_FALSE(a.embedded.has_value());
    CHECK_FALSE(a.ordSigma.has_value());
    REQUIRE(a.monodromy);
    // simply-connected domain: trivial monodromy counts as elliptic
    CHECK(a.monodromy->classification.tag == Su11Tag::CenterPM);
}

TEST_CASE("umbilic data raises UmbilicEnd") {
    const WeierstrassData hor = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    CHECK_THROWS_AS(analyze_end(hor, Puncture::inf()), UmbilicEnd);
}

TEST_CASE("embedded_by_orders") {
    CHECK(embedded_by_orders(0, -2));
    CHECK_FALSE(embedded_by_orders(1, -2));
    CHECK_THROWS_AS(embedded_by_orders(0, -1), InequalityViolated);
}

TEST_CASE("lift_metric_order") {
    const Expr mob = parse_expr("(2*z+1)/(z+2)");
    // synthetic regular data: Q = z^{-1} dz^2 at 0 -> order -1 (incomplete)
    const Expr q1 = ipow_expr(Expr::var(), -1);
    CHECK(lift_metric_order(mob, q1, Puncture::at(0)) == doctest::Approx(-1));

    // catenoid-shaped data: Q ~ z^{-2} -> order -2
    const Expr q2 = Expr::constant(0.09) * ipow_expr(Expr::var(), -2);
    CHECK(lift_metric_order(mob, q2, Puncture::at(0)) == doctest::Approx(-2));

    CHECK_THROWS_AS(lift_metric_order(mob, Expr::constant(0), Puncture::at(0)),
                    UmbilicEnd);
    CHECK_THROWS_AS(lift_metric_order(Expr::constant(2), q2, Puncture::at(0)),
                    ConstantGauss);
}

TEST_CASE("lift-metric order through a pole of G") {
    // G with a double pole at 0: ordSigma = ord(G') - 2 ord(G) = -3 + 4 = 1
    const Expr G = ipow_expr(Expr::var(), -2);
    const Expr q = ipow_expr(Expr::var(), -1);
    // m_lift = 2 min(0, -2) + ordq - ordG' = -4 - 1 + 3 = -2
    CHECK(lift_metric_order(G, q, Puncture::at(0)) == doctest::Approx(-2));
}

TEST_CASE("gauss_degree") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    CHECK(gauss_degree(cat, acquire_gauss_map(cat)) == Degree::of(1));

    const WeierstrassData enn = make_example(ExampleFamily::Enneper, {1.0});
    CHECK(gauss_degree(enn, acquire_gauss_map(enn)) == Degree::inf());

    const WeierstrassData hor = make_example(ExampleFamily::Horosphere, {0.0, 1.0});
    CHECK(gauss_degree(hor, acquire_gauss_map(hor)) == Degree::of(0));

    // user-supplied closed forms go through the rational path
    bool heuristic = true;
    CHECK(gauss_degree(cat, GaussMap::expression(parse_expr("(z+1)/(z-3)")), &heuristic) ==
          Degree::of(1));
    CHECK_FALSE(heuristic);
}

TEST_CASE("numeric preimage counting") {
    CHECK(preimage_count(ipow_expr(Expr::var(), 3)) == 3);
    CHECK(preimage_count(parse_expr("(2*z+1)/(z+2)")) == 1);
    CHECK(preimage_count(parse_expr("z^2 + 1/z")) == 3);
}

TEST_CASE("numeric sigma order from samples") {
    // pretend G = z^2 is only available through point samples
    const auto sampler = [](cplx z) { return z * z; };
    CHECK(numeric_sigma_order(sampler) == doctest::Approx(1));

    const auto mob = [](cplx z) { return (2.0 * z + cplx(1)) / (z + cplx(2)); };
    CHECK(numeric_sigma_order(mob) == doctest::Approx(0));
}

TEST_CASE("numeric end analysis path agrees with the closed form") {
    // feed the catenoid through the flow-sampled route by withholding the
    // Moebius detection
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    const EndAnalysis a = analyze_end(cat, Puncture::at(0), GaussMap::none());
    REQUIRE(a.ordSigma);
    CHECK(*a.ordSigma == doctest::Approx(0));
    REQUIRE(a.embedded);
    CHECK(*a.embedded);
}

TEST_CASE("osserman reports for the catalogue") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    const OssermanReport rc = osserman_check(cat);
    CHECK(rc.n == 2);
    CHECK(rc.chiM == 0);
    CHECK(rc.rhs == 2);
    REQUIRE(rc.lhs);
    CHECK(*rc.lhs == 2);
    CHECK(rc.degG == Degree::of(1));
    CHECK(rc.holds);
    CHECK(rc.equality);
    for (const auto& e : rc.per_end) {
        CHECK(e.regular);
        REQUIRE(e.embedded);
        CHECK(*e.embedded);
    }

    const WeierstrassData enn = make_example(ExampleFamily::Enneper, {1.0});
    const OssermanReport re = osserman_check(enn);
    CHECK(re.n == 1);
    CHECK(re.chiM == 1);
    CHECK(re.rhs == 0);
    CHECK(re.degG.infinite);
    CHECK_FALSE(re.lhs);
    CHECK(re.holds);
    CHECK_FALSE(re.equality);

    const WeierstrassData hor = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    const OssermanReport rh = osserman_check(hor);
    CHECK(rh.umbilic_surface);
    CHECK(rh.degG == Degree::of(0));
    REQUIRE(rh.per_end.size() == 1);
    CHECK(rh.per_end[0].umbilic);
    CHECK_FALSE(rh.per_end[0].ordQ.has_value());
}

TEST_CASE("catenoid report is invariant under lambda deformation") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    const OssermanReport base = osserman_check(cat);
    for (const double lambda : {0.5, 2.0, 3.0}) {
        const OssermanReport r = osserman_check(lambda_deform(cat, lambda));
        CHECK(r.degG == base.degG);
        CHECK(r.equality == base.equality);
        CHECK(r.holds == base.holds);
        REQUIRE(r.per_end.size() == base.per_end.size());
        for (std::size_t k = 0; k < r.per_end.size(); ++k) {
            CHECK(*r.per_end[k].ordQ == doctest::Approx(*base.per_end[k].ordQ));
            CHECK(*r.per_end[k].ordSigma == doctest::Approx(*base.per_end[k].ordSigma));
            CHECK(*r.per_end[k].embedded == *base.per_end[k].embedded);
        }
    }
}

TEST_CASE("catenoid report is invariant under random gauges") {
    const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {0.8});
    const OssermanReport base = osserman_check(cat);
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int k = 0; k < 5; ++k) {
        const cplx q(u(rng), u(rng));
        const cplx p = std::polar(std::sqrt(1.0 + std::norm(q)), u(rng));
        const OssermanReport r = osserman_check(gauge_transform(cat, p, q));
        CHECK(r.degG == base.degG);
        CHECK(r.equality == base.equality);
        for (std::size_t j = 0; j < r.per_end.size(); ++j) {
            CHECK(*r.per_end[j].ordQ == doctest::Approx(*base.per_end[j].ordQ));
            CHECK(*r.per_end[j].embedded == *base.per_end[j].embedded);
        }
    }
}

TEST_CASE("monodromy ellipticity across the mu family") {
    for (const double mu : {0.3, 0.8, 1.2, 2.5}) {
        const WeierstrassData cat = make_example(ExampleFamily::Catenoid, {mu});
        const MonodromyResult m = monodromy(cat, Puncture::at(0), 0.5);
        REQUIRE(m.classification.tag == Su11Tag::Elliptic);
        // theta must match mu pi mod pi up to the orientation ambiguity
        const cplx probe = std::exp(cplx(0, 2.0 * m.classification.theta));
        const double err = std::min(std::abs(probe - std::exp(cplx(0, 2.0 * mu * M_PI))),
                                    std::abs(probe - std::exp(cplx(0, -2.0 * mu * M_PI))));
        CHECK(err <= 1e-6);
    }
}
