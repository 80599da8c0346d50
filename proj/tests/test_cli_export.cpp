#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmcface/export.hpp"

using namespace cmcface;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const char* name) {
    return std::string("cmcface_test_") + name;
}

int count_lines_with(const std::string& text, const std::string& prefix) {
    int n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

} // namespace

TEST_CASE("load_scene: minimal catenoid") {
    const SceneSpec s = load_scene(R"({"example":"catenoid","params":{"mu":0.8}})");
    CHECK(s.example == "catenoid");
    REQUIRE(s.params.size() == 1);
    CHECK(s.params[0] == 0.8);
    const WeierstrassData d = build_data(s);
    REQUIRE(d.punctures.size() == 2);
    CHECK(d.punctures[0] == Puncture::at(0));
    CHECK(d.punctures[1] == Puncture::inf());
    CHECK(s.region.chart == Chart::LogPolar);
}

TEST_CASE("load_scene: lambda composes with the deformation") {
    const SceneSpec s =
        load_scene(R"({"example":"catenoid","params":{"mu":0.8},"lambda":2.0})");
    const WeierstrassData d = build_data(s);
    const WeierstrassData base = make_example(ExampleFamily::Catenoid, {0.8});
    const cplx z0(1.3, 0.2);
    CHECK(std::abs(d.g.eval(z0) - 2.0 * base.g.eval(z0)) < 1e-13);
    CHECK(std::abs(d.omega.eval(z0) - 0.5 * base.omega.eval(z0)) < 1e-13);
}

TEST_CASE("load_scene: validation failures") {
    CHECK_THROWS_AS(load_scene(R"({"example":"catenoid","params":{"mu":0.8},
                                   "grid":{"nu":1}})"),
                    ValidationError);
    CHECK_THROWS_AS(load_scene(R"({"example":"catenoid","params":{"mu":0.8},
                                   "bogus": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(load_scene(R"({"example":"noexample","params":{}})"), BadParams);
    CHECK_THROWS_AS(load_scene(R"({"params":{"mu":0.8}})"), ValidationError);
    CHECK_THROWS_AS(load_scene(R"({"example":"catenoid","params":{"mu":0.8},
                                   "tolerances":{"ode_rel":-1}})"),
                    ValidationError);
    CHECK_THROWS_AS(load_scene(R"({"example":"catenoid","params":{"c":0.8}})"),
                    ValidationError);
}

TEST_CASE("load_scene: parse errors carry line and column") {
    try {
        load_scene("{\n  \"example\": \"catenoid\",\n  !\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("load_scene: explicit expression source") {
    const SceneSpec s = load_scene(R"json({
        "g": "z^mu", "omega": "(1-mu^2)/(4*mu)*z^(-(mu+1))",
        "parameters": {"mu": 0.8},
        "punctures": [0, "inf"],
        "basepoint": [2, 0],
        "grid": {"chart": "logpolar", "u": [-1, 1], "v": [0, 3.14], "nu": 8, "nv": 8}
    })json");
    const WeierstrassData d = build_data(s);
    const WeierstrassData ref = make_example(ExampleFamily::Catenoid, {0.8});
    CHECK(numerically_equal(d.g, ref.g, 1e-12));
    CHECK(numerically_equal(d.omega, ref.omega, 1e-12));
}

TEST_CASE("mesh export: counting contract and failed cells") {
    const WeierstrassData d = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    GridRegion r;
    r.chart = Chart::Cartesian;
    r.u0 = 0;
    r.u1 = 1;
    r.v0 = 0;
    r.v1 = 1;
    SampleGrid grid = sample_grid(d, r, 2, 2, {}, 1);
    const std::string path = tmp_path("mesh.obj");
    export_mesh(grid, path, "deadbeef");
    std::string text = slurp(path);
    CHECK(count_lines_with(text, "v ") == 4);
    CHECK(count_lines_with(text, "f ") == 1);
    CHECK(text.find("# scene deadbeef") != std::string::npos);

    // a failed corner drops the face but keeps the vertex slots
    grid.at(1, 1).ok = false;
    export_mesh(grid, path, "deadbeef");
    text = slurp(path);
    CHECK(count_lines_with(text, "v ") == 4);
    CHECK(count_lines_with(text, "f ") == 0);
    std::remove(path.c_str());
}

TEST_CASE("mesh export: hollow-ball bound holds for every vertex") {
    const WeierstrassData d = make_example(ExampleFamily::Catenoid, {0.8});
    GridRegion r;
    r.chart = Chart::LogPolar;
    r.u0 = -2;
    r.u1 = 2;
    r.v0 = 0;
    r.v1 = M_PI;
    const SampleGrid grid = sample_grid(d, r, 30, 30);
    const std::string path = tmp_path("cat.obj");
    export_mesh(grid, path, scene_hash(nlohmann::json{{"k", 1}}));
    std::istringstream in(slurp(path));
    std::string tok;
    int vertices = 0;
    while (in >> tok) {
        if (tok != "v") continue;
        double x, y, z;
        in >> x >> y >> z;
        const double n2 = x * x + y * y + z * z;
        CHECK(n2 > std::exp(-M_PI));
        CHECK(n2 < std::exp(M_PI));
        ++vertices;
    }
    CHECK(vertices == 900);
    std::remove(path.c_str());
}

TEST_CASE("curve export") {
    const WeierstrassData enn = make_example(ExampleFamily::Enneper, {1.0});
    GridRegion r;
    r.chart = Chart::Cartesian;
    r.u0 = -1.3;
    r.u1 = 1.3;
    r.v0 = -1.3;
    r.v1 = 1.3;
    const auto curves = singular_curves(enn, r, 80);
    REQUIRE(curves.size() == 1);
    const std::string path = tmp_path("curves.obj");
    export_curves(curves, path, "cafe");
    const std::string text = slurp(path);
    CHECK(count_lines_with(text, "l ") == 1);
    CHECK(count_lines_with(text, "# domain") > 0);
    CHECK(count_lines_with(text, "v ") > 50);

    export_curves({}, path, "cafe");
    const std::string empty = slurp(path);
    CHECK(count_lines_with(empty, "v ") == 0);
    CHECK(count_lines_with(empty, "# scene cafe") == 1);
    std::remove(path.c_str());
}

TEST_CASE("determinism: identical scenes give byte-identical exports") {
    const SceneSpec s = load_scene(
        R"({"example":"catenoid","params":{"mu":0.8},
            "grid":{"u":[-1,1],"v":[0,3.14],"nu":12,"nv":12}})");
    const WeierstrassData d = build_data(s);
    const std::string h = scene_hash(s.echo);
    const std::string p1 = tmp_path("det1.obj"), p2 = tmp_path("det2.obj");
    export_mesh(sample_grid(d, s.region, s.nu, s.nv, integrator_options(s)), p1, h);
    export_mesh(sample_grid(d, s.region, s.nu, s.nv, integrator_options(s)), p2, h);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());

    CHECK(scene_hash(s.echo) == scene_hash(s.echo));
    CHECK(scene_hash(s.echo) != scene_hash(nlohmann::json{{"other", 1}}));
}

TEST_CASE("analysis report round-trips") {
    const SceneSpec s = load_scene(R"({"example":"catenoid","params":{"mu":0.8}})");
    const WeierstrassData d = build_data(s);
    AnalysisReport rep;
    rep.scene = s.echo;
    IntegrationStats stats;
    rep.osserman = osserman_check(d, GaussMap::none(), integrator_options(s), &stats);
    rep.stats = stats;

    const std::string path = tmp_path("report.json");
    write_report(rep, path);
    const AnalysisReport back = read_report(path);
    CHECK(report_equal(rep, back));

    // byte-identical re-serialization
    const std::string again = tmp_path("report2.json");
    write_report(back, again);
    CHECK(slurp(path) == slurp(again));
    std::remove(path.c_str());
    std::remove(again.c_str());
}

TEST_CASE("exports signal IO failures") {
    const WeierstrassData d = make_example(ExampleFamily::Horosphere, {1.2, 1.0});
    GridRegion r;
    r.u0 = 0; r.u1 = 1; r.v0 = 0; r.v1 = 1;
    const SampleGrid grid = sample_grid(d, r, 2, 2, {}, 1);
    CHECK_THROWS_AS(export_mesh(grid, "no/such/dir/mesh.obj", "x"), IoError);
    CHECK_THROWS_AS(export_curves({}, "no/such/dir/curves.obj", "x"), IoError);
}

TEST_CASE("umbilic report serializes with null orders") {
    const SceneSpec s = load_scene(R"({"example":"horosphere","params":{"c1":1.2,"c2":1}})");
    const WeierstrassData d = build_data(s);
    AnalysisReport rep;
    rep.scene = s.echo;
    rep.osserman = osserman_check(d);
    const nlohmann::json j = to_json(rep);
    CHECK(j["osserman"]["umbilic_surface"] == true);
    CHECK(j["osserman"]["per_end"][0]["ordQ"].is_null());
    const AnalysisReport back = report_from_json(j);
    CHECK(report_equal(rep, back));
}
