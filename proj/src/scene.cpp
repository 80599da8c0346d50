#include "cmcface/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cmcface {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error_at(const std::string& text, std::size_t byte,
                                 const std::string& what) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw ParseError(what, line, col);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

cplx parse_complex(const json& v, const std::string& field) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw ValidationError("field '" + field + "' must be a number or [re, im]");
}

Puncture parse_puncture(const json& v, const std::string& field) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return Puncture::inf();
        throw ValidationError("field '" + field + "' must be a complex value or \"inf\"");
    }
    return Puncture::at(parse_complex(v, field));
}

double require_positive(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const double v = obj.at(key).get<double>();
    if (!(v > 0)) throw ValidationError(std::string("tolerance '") + key + "' must be positive");
    return v;
}

// Canonical parameter names of the built-in families, in make_example order.
std::vector<std::string> family_param_names(ExampleFamily f) {
    switch (f) {
        case ExampleFamily::Horosphere: return {"c1", "c2"};
        case ExampleFamily::Enneper: return {"c"};
        case ExampleFamily::Helicoid: return {"c"};
        case ExampleFamily::Catenoid: return {"mu"};
    }
    return {};
}

GridRegion default_region(const std::string& example) {
    GridRegion r;
    if (example == "catenoid") {
        r.chart = Chart::LogPolar;
        r.u0 = -2;
        r.u1 = 2;
        r.v0 = 0;
        r.v1 = M_PI;
    } else if (example == "enneper") {
        r.u0 = -1.3;
        r.u1 = 1.3;
        r.v0 = -1.3;
        r.v1 = 1.3;
    } else if (example == "helicoid") {
        r.u0 = -0.9;
        r.u1 = 0.9;
        r.v0 = -3;
        r.v1 = 3;
    } else { // horosphere and explicit data
        r.u0 = -3;
        r.u1 = 3;
        r.v0 = -3;
        r.v1 = 3;
    }
    return r;
}

} // namespace

SceneSpec load_scene(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_error_at(text, e.byte, e.what());
    }
    if (!doc.is_object()) throw ValidationError("scene document must be a JSON object");

    reject_unknown(doc,
                   {"example", "params", "g", "omega", "parameters", "punctures",
                    "basepoint", "lambda", "gauge", "grid", "outputs", "tolerances"},
                   "scene");

    SceneSpec s;
    const bool has_example = doc.contains("example");
    const bool has_exprs = doc.contains("g") || doc.contains("omega");
    if (has_example == has_exprs)
        throw ValidationError(
            "scene must specify exactly one data source: 'example' or 'g'/'omega'");

    if (has_example) {
        s.example = doc.at("example").get<std::string>();
        const ExampleFamily fam = example_family_from_name(s.example); // validates
        const auto names = family_param_names(fam);
        if (!doc.contains("params"))
            throw ValidationError("scene with 'example' requires a 'params' object");
        const json& pj = doc.at("params");
        if (!pj.is_object()) throw ValidationError("'params' must be an object");
        reject_unknown(pj, std::set<std::string>(names.begin(), names.end()), "params");
        for (const auto& name : names) {
            if (!pj.contains(name))
                throw ValidationError("missing parameter '" + name + "' for example '" +
                                      s.example + "'");
            s.params.push_back(pj.at(name).get<double>());
        }
    } else {
        s.explicit_source = true;
        if (!doc.contains("g") || !doc.contains("omega"))
            throw ValidationError("explicit scenes require both 'g' and 'omega'");
        s.g_text = doc.at("g").get<std::string>();
        s.omega_text = doc.at("omega").get<std::string>();
        if (doc.contains("parameters")) {
            for (auto it = doc.at("parameters").begin(); it != doc.at("parameters").end(); ++it)
                s.parameters[it.key()] = it.value().get<double>();
        }
        if (doc.contains("punctures")) {
            for (const auto& p : doc.at("punctures"))
                s.punctures.push_back(parse_puncture(p, "punctures"));
        }
        if (!doc.contains("basepoint"))
            throw ValidationError("explicit scenes require a 'basepoint'");
        s.basepoint = parse_complex(doc.at("basepoint"), "basepoint");
    }

    if (doc.contains("lambda")) {
        s.lambda = doc.at("lambda").get<double>();
        if (*s.lambda == 0.0) throw ValidationError("'lambda' must be nonzero");
    }
    if (doc.contains("gauge")) {
        const json& gj = doc.at("gauge");
        reject_unknown(gj, {"p", "q"}, "gauge");
        if (!gj.contains("p") || !gj.contains("q"))
            throw ValidationError("'gauge' requires both 'p' and 'q'");
        const cplx p = parse_complex(gj.at("p"), "gauge.p");
        const cplx q = parse_complex(gj.at("q"), "gauge.q");
        if (std::abs(std::norm(p) - std::norm(q) - 1.0) > 1e-12)
            throw ValidationError("'gauge' parameters must satisfy p pbar - q qbar = 1");
        s.gauge = {p, q};
    }

    s.region = default_region(s.example);
    s.nu = 100;
    s.nv = 100;
    if (doc.contains("grid")) {
        const json& gj = doc.at("grid");
        reject_unknown(gj, {"chart", "u", "v", "nu", "nv"}, "grid");
        if (gj.contains("chart")) {
            const std::string c = gj.at("chart").get<std::string>();
            if (c == "cartesian")
                s.region.chart = Chart::Cartesian;
            else if (c == "logpolar")
                s.region.chart = Chart::LogPolar;
            else
                throw ValidationError("grid.chart must be 'cartesian' or 'logpolar'");
        }
        const auto range = [&](const char* key, double& lo, double& hi) {
            if (!gj.contains(key)) return;
            const json& r = gj.at(key);
            if (!r.is_array() || r.size() != 2)
                throw ValidationError(std::string("grid.") + key + " must be [min, max]");
            lo = r[0].get<double>();
            hi = r[1].get<double>();
            if (!(hi > lo))
                throw ValidationError(std::string("grid.") + key + " must be increasing");
        };
        range("u", s.region.u0, s.region.u1);
        range("v", s.region.v0, s.region.v1);
        if (gj.contains("nu")) s.nu = gj.at("nu").get<std::size_t>();
        if (gj.contains("nv")) s.nv = gj.at("nv").get<std::size_t>();
    }
    if (s.nu < 2 || s.nv < 2)
        throw ValidationError("grid resolutions nu/nv must be at least 2");

    if (doc.contains("outputs")) {
        const json& oj = doc.at("outputs");
        reject_unknown(oj, {"mesh", "curves", "report"}, "outputs");
        if (oj.contains("mesh")) s.mesh_path = oj.at("mesh").get<std::string>();
        if (oj.contains("curves")) s.curves_path = oj.at("curves").get<std::string>();
        if (oj.contains("report")) s.report_path = oj.at("report").get<std::string>();
    }

    if (doc.contains("tolerances")) {
        const json& tj = doc.at("tolerances");
        reject_unknown(tj, {"ode_rel", "ode_abs", "singular", "class"}, "tolerances");
        s.tol.ode_rel = require_positive(tj, "ode_rel", s.tol.ode_rel);
        s.tol.ode_abs = require_positive(tj, "ode_abs", s.tol.ode_abs);
        s.tol.singular = require_positive(tj, "singular", s.tol.singular);
        s.tol.classify = require_positive(tj, "class", s.tol.classify);
    }

    s.echo = doc;
    return s;
}

SceneSpec load_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scene(ss.str());
}

WeierstrassData build_data(const SceneSpec& scene) {
    WeierstrassData d;
    if (!scene.example.empty()) {
        d = make_example(example_family_from_name(scene.example), scene.params);
    } else {
        const Expr g = parse_expr(scene.g_text, scene.parameters);
        const Expr w = parse_expr(scene.omega_text, scene.parameters);
        d = make_weierstrass(g, w, scene.punctures, scene.basepoint);
    }
    if (scene.gauge) d = gauge_transform(d, scene.gauge->first, scene.gauge->second);
    if (scene.lambda) d = lambda_deform(d, *scene.lambda);
    return d;
}

IntegratorOptions integrator_options(const SceneSpec& scene) {
    IntegratorOptions opts;
    opts.rel_tol = scene.tol.ode_rel;
    opts.abs_tol = scene.tol.ode_abs;
    opts.class_tol = scene.tol.classify;
    return opts;
}

} // namespace cmcface
