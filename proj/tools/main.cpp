// cmcface: CMC-1 faces in de Sitter 3-space from Weierstrass data.
//
// Subcommands:
//   examples                      list the built-in data catalogue
//   generate <scene> [...]        sample a grid, export mesh and curves
//   monodromy <scene> --end <p>   monodromy matrix around one puncture
//   analyze <scene> [...]         full end/Osserman analysis report
//   osserman <scene>              one-line Osserman verdict
//
// Exit codes: 0 success, 1 validation/config error, 2 numeric failure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "cmcface/export.hpp"

namespace {

using namespace cmcface;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(cplx v) {
    std::string s = fmt(v.real());
    if (v.imag() != 0.0) s += (v.imag() < 0 ? " - " : " + ") + fmt(std::abs(v.imag())) + "i";
    return s;
}

std::string fmt(const Mat2C& m) {
    return "[[" + fmt(m.a11) + ", " + fmt(m.a12) + "], [" + fmt(m.a21) + ", " +
           fmt(m.a22) + "]]";
}

void cmd_examples() {
    std::cout << "built-in Weierstrass data (name: parameters -- data):\n"
              << "  horosphere: c1, c2      -- g = c1,   omega = c2 dz\n"
              << "  enneper:    c           -- g = z,    omega = c dz\n"
              << "  helicoid:   c           -- g = e^z,  omega = i c e^-z dz\n"
              << "  catenoid:   mu (>0, !=1) -- g = z^mu, omega = (1-mu^2)/(4 mu) "
                 "z^-(mu+1) dz\n";
}

Puncture parse_end(const std::string& text) {
    if (text == "inf") return Puncture::inf();
    const Expr e = parse_expr(text);
    const auto c = e.as_const();
    if (!c) throw ValidationError("--end must be a complex constant or 'inf'");
    return Puncture::at(*c);
}

int cmd_monodromy(const std::string& scene_path, const std::string& end_text,
                  double radius) {
    const SceneSpec scene = load_scene_file(scene_path);
    const WeierstrassData data = build_data(scene);
    const Puncture end = parse_end(end_text);
    const MonodromyResult m = monodromy(data, end, radius, integrator_options(scene));
    std::cout << "end " << to_string(end) << ", loop radius " << fmt(radius) << "\n";
    std::cout << "Phi = " << fmt(m.Phi) << "\n";
    std::cout << "eigenvalues: " << fmt(m.eigenvalues[0]) << ", " << fmt(m.eigenvalues[1])
              << "\n";
    std::cout << "class: " << to_string(m.classification.tag);
    if (m.classification.tag == Su11Tag::Elliptic)
        std::cout << " (theta = " << fmt(m.classification.theta) << ")";
    if (m.classification.tag == Su11Tag::Hyperbolic)
        std::cout << " (s = " << fmt(m.classification.s) << ")";
    std::cout << "\nsu11 residual: " << fmt(m.su11_residual) << "\n";
    return 0;
}

std::string osserman_verdict(const OssermanReport& r) {
    if (r.umbilic_surface)
        return "umbilic surface (Q == 0): Osserman arithmetic skipped";
    const std::string lhs = r.degG.infinite
                                ? "2*inf"
                                : "2*" + std::to_string(r.degG.value);
    std::string line = lhs + " >= " + std::to_string(r.rhs) + " : ";
    if (r.equality) {
        line += "EQUALITY (all ends regular, embedded)";
    } else if (r.holds) {
        line += "HOLDS (strict)";
    } else {
        line += "VIOLATED";
    }
    return line;
}

int cmd_osserman(const std::string& scene_path) {
    const SceneSpec scene = load_scene_file(scene_path);
    const WeierstrassData data = build_data(scene);
    const OssermanReport r = osserman_check(data, GaussMap::none(), integrator_options(scene));
    std::cout << osserman_verdict(r) << "\n";
    return 0;
}

int cmd_analyze(const std::string& scene_path, std::string report_path) {
    const SceneSpec scene = load_scene_file(scene_path);
    const WeierstrassData data = build_data(scene);
    AnalysisReport rep;
    rep.scene = scene.echo;
    IntegrationStats stats;
    rep.osserman = osserman_check(data, GaussMap::none(), integrator_options(scene), &stats);
    rep.stats = stats;

    if (report_path.empty()) report_path = scene.report_path;
    if (!report_path.empty()) {
        write_report(rep, report_path);
        std::cout << "report written to " << report_path << "\n";
    } else {
        std::cout << to_json(rep).dump(2) << "\n";
    }
    for (const auto& w : data.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << osserman_verdict(rep.osserman) << "\n";
    return 0;
}

int cmd_generate(const std::string& scene_path, std::string mesh_path,
                 std::string curves_path) {
    const SceneSpec scene = load_scene_file(scene_path);
    const WeierstrassData data = build_data(scene);
    const IntegratorOptions opts = integrator_options(scene);
    const std::string hash = scene_hash(scene.echo);

    if (mesh_path.empty()) mesh_path = scene.mesh_path;
    if (curves_path.empty()) curves_path = scene.curves_path;
    if (mesh_path.empty() && curves_path.empty())
        throw ValidationError("generate: no mesh or curves output configured");

    if (!mesh_path.empty()) {
        const SampleGrid grid = sample_grid(data, scene.region, scene.nu, scene.nv, opts);
        export_mesh(grid, mesh_path, hash);
        std::cout << "mesh: " << mesh_path << " (" << grid.nu << "x" << grid.nv << ", "
                  << grid.failures.size() << " failed nodes, " << grid.stats.det_repairs
                  << " det repairs)\n";
    }
    if (!curves_path.empty()) {
        const auto curves =
            singular_curves(data, scene.region, std::max(scene.nu, scene.nv), opts);
        export_curves(curves, curves_path, hash);
        std::cout << "curves: " << curves_path << " (" << curves.size()
                  << " components)\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CMC-1 faces in de Sitter 3-space from Weierstrass data"};
    app.require_subcommand(1);

    auto* ex = app.add_subcommand("examples", "list the built-in data catalogue");

    std::string scene_path, end_text, report_path, mesh_path, curves_path;
    double radius = 0.5;

    auto* gen = app.add_subcommand("generate", "sample a grid and export mesh/curves");
    gen->add_option("scene", scene_path, "scene JSON file")->required();
    gen->add_option("--out-mesh", mesh_path, "OBJ mesh output path");
    gen->add_option("--out-curves", curves_path, "OBJ singular-curve output path");

    auto* mon = app.add_subcommand("monodromy", "monodromy around one puncture");
    mon->add_option("scene", scene_path, "scene JSON file")->required();
    mon->add_option("--end", end_text, "puncture (complex constant or 'inf')")->required();
    mon->add_option("--radius", radius, "loop radius (default 0.5)");

    auto* ana = app.add_subcommand("analyze", "full analysis report");
    ana->add_option("scene", scene_path, "scene JSON file")->required();
    ana->add_option("--report", report_path, "report JSON output path");

    auto* oss = app.add_subcommand("osserman", "one-line Osserman verdict");
    oss->add_option("scene", scene_path, "scene JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ex->parsed()) {
            cmd_examples();
            return 0;
        }
        if (gen->parsed()) return cmd_generate(scene_path, mesh_path, curves_path);
        if (mon->parsed()) return cmd_monodromy(scene_path, end_text, radius);
        if (ana->parsed()) return cmd_analyze(scene_path, report_path);
        if (oss->parsed()) return cmd_osserman(scene_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BadParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
