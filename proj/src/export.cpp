#include "cmcface/export.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace cmcface {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from(const json& j) { return cplx(j.at(0).get<double>(), j.at(1).get<double>()); }

json puncture_json(const Puncture& p) {
    if (p.infinite) return "inf";
    return complex_json(p.z);
}

Puncture puncture_from(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return Puncture::inf();
    return Puncture::at(complex_from(j));
}

json mat_json(const Mat2C& m) {
    return json::array({complex_json(m.a11), complex_json(m.a12), complex_json(m.a21),
                        complex_json(m.a22)});
}

Mat2C mat_from(const json& j) {
    return {complex_from(j.at(0)), complex_from(j.at(1)), complex_from(j.at(2)),
            complex_from(j.at(3))};
}

json opt_double(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> opt_double_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json degree_json(const Degree& d) {
    if (d.infinite) return "inf";
    return d.value;
}

Degree degree_from(const json& j) {
    if (j.is_string()) return Degree::inf();
    return Degree::of(j.get<long>());
}

json monodromy_json(const MonodromyResult& m) {
    json j;
    j["Phi"] = mat_json(m.Phi);
    j["class"] = to_string(m.classification.tag);
    j["theta"] = m.classification.theta;
    j["s"] = m.classification.s;
    j["eigenvalues"] = json::array({complex_json(m.eigenvalues[0]),
                                    complex_json(m.eigenvalues[1])});
    j["su11_residual"] = m.su11_residual;
    return j;
}

MonodromyResult monodromy_from(const json& j) {
    MonodromyResult m;
    m.Phi = mat_from(j.at("Phi"));
    const std::string cls = j.at("class").get<std::string>();
    if (cls == "elliptic") m.classification.tag = Su11Tag::Elliptic;
    else if (cls == "hyperbolic") m.classification.tag = Su11Tag::Hyperbolic;
    else if (cls == "parabolic") m.classification.tag = Su11Tag::Parabolic;
    else m.classification.tag = Su11Tag::CenterPM;
    m.classification.theta = j.at("theta").get<double>();
    m.classification.s = j.at("s").get<double>();
    m.eigenvalues = {complex_from(j.at("eigenvalues").at(0)),
                     complex_from(j.at("eigenvalues").at(1))};
    m.su11_residual = j.at("su11_residual").get<double>();
    return m;
}

json end_json(const EndAnalysis& a) {
    json j;
    j["puncture"] = puncture_json(a.puncture);
    j["umbilic"] = a.umbilic;
    j["ordQ"] = opt_double(a.ordQ);
    j["regular"] = a.regular;
    j["monodromy"] = a.monodromy ? monodromy_json(*a.monodromy) : json(nullptr);
    j["ordSigma"] = opt_double(a.ordSigma);
    j["ordLift"] = opt_double(a.ordLift);
    j["embedded"] = a.embedded ? json(*a.embedded) : json(nullptr);
    j["lift_complete"] = a.lift_complete ? json(*a.lift_complete) : json(nullptr);
    j["notes"] = a.notes;
    return j;
}

EndAnalysis end_from(const json& j) {
    EndAnalysis a;
    a.puncture = puncture_from(j.at("puncture"));
    a.umbilic = j.at("umbilic").get<bool>();
    a.ordQ = opt_double_from(j.at("ordQ"));
    a.regular = j.at("regular").get<bool>();
    if (!j.at("monodromy").is_null()) a.monodromy = monodromy_from(j.at("monodromy"));
    a.ordSigma = opt_double_from(j.at("ordSigma"));
    a.ordLift = opt_double_from(j.at("ordLift"));
    if (!j.at("embedded").is_null()) a.embedded = j.at("embedded").get<bool>();
    if (!j.at("lift_complete").is_null())
        a.lift_complete = j.at("lift_complete").get<bool>();
    a.notes = j.at("notes").get<std::vector<std::string>>();
    return a;
}

json osserman_json(const OssermanReport& r) {
    json j;
    j["genus"] = r.genus;
    j["ends"] = r.n;
    j["chiM"] = r.chiM;
    j["degG"] = degree_json(r.degG);
    j["degG_heuristic"] = r.degG_heuristic;
    j["lhs"] = r.lhs ? json(*r.lhs) : json(nullptr);
    j["rhs"] = r.rhs;
    j["holds"] = r.holds;
    j["equality"] = r.equality;
    j["umbilic_surface"] = r.umbilic_surface;
    json ends = json::array();
    for (const auto& e : r.per_end) ends.push_back(end_json(e));
    j["per_end"] = std::move(ends);
    return j;
}

OssermanReport osserman_from(const json& j) {
    OssermanReport r;
    r.genus = j.at("genus").get<int>();
    r.n = j.at("ends").get<int>();
    r.chiM = j.at("chiM").get<int>();
    r.degG = degree_from(j.at("degG"));
    r.degG_heuristic = j.at("degG_heuristic").get<bool>();
    if (!j.at("lhs").is_null()) r.lhs = j.at("lhs").get<long>();
    r.rhs = j.at("rhs").get<long>();
    r.holds = j.at("holds").get<bool>();
    r.equality = j.at("equality").get<bool>();
    r.umbilic_surface = j.at("umbilic_surface").get<bool>();
    for (const auto& e : j.at("per_end")) r.per_end.push_back(end_from(e));
    return r;
}

} // namespace

std::string scene_hash(const json& echo) {
    const std::string dump = echo.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

void export_mesh(const SampleGrid& grid, const std::string& path,
                 const std::string& hash) {
    if (grid.samples.empty()) throw IoError("export_mesh: empty grid");
    std::ofstream out(path);
    if (!out) throw IoError("export_mesh: cannot open '" + path + "'");

    out << "# cmcface " << kToolVersion << " surface mesh (hollow-ball coordinates)\n";
    out << "# scene " << hash << "\n";
    out << "# grid " << grid.nu << " x " << grid.nv << "\n";

    // vertices, row-major; failed samples keep a placeholder to preserve
    // the index arithmetic
    for (std::size_t iv = 0; iv < grid.nv; ++iv) {
        for (std::size_t iu = 0; iu < grid.nu; ++iu) {
            const auto& s = grid.at(iu, iv);
            if (s.ok) {
                out << "v " << fmt17(s.hollow[0]) << ' ' << fmt17(s.hollow[1]) << ' '
                    << fmt17(s.hollow[2]) << '\n';
            } else {
                out << "v 0 0 0\n";
            }
        }
    }
    const auto idx = [&](std::size_t iu, std::size_t iv) {
        return iv * grid.nu + iu + 1; // OBJ is 1-based
    };
    for (std::size_t iv = 0; iv + 1 < grid.nv; ++iv) {
        for (std::size_t iu = 0; iu + 1 < grid.nu; ++iu) {
            const bool ok = grid.at(iu, iv).ok && grid.at(iu + 1, iv).ok &&
                            grid.at(iu + 1, iv + 1).ok && grid.at(iu, iv + 1).ok;
            if (!ok) continue;
            out << "f " << idx(iu, iv) << ' ' << idx(iu + 1, iv) << ' '
                << idx(iu + 1, iv + 1) << ' ' << idx(iu, iv + 1) << '\n';
        }
    }
    if (!out) throw IoError("export_mesh: write failed for '" + path + "'");
}

void export_curves(const std::vector<SingularCurve>& curves, const std::string& path,
                   const std::string& hash) {
    std::ofstream out(path);
    if (!out) throw IoError("export_curves: cannot open '" + path + "'");
    out << "# cmcface " << kToolVersion << " singular curves (|g| = 1)\n";
    out << "# scene " << hash << "\n";
    std::size_t base = 1;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        if (curve.hollow.empty() && curve.domain.empty()) continue;
        out << "# curve " << c << (curve.closed ? " closed" : " open") << "\n";
        const std::size_t nv =
            curve.hollow.empty() ? curve.domain.size() : curve.hollow.size();
        for (std::size_t k = 0; k < nv; ++k) {
            out << "# domain " << fmt17(curve.domain[k].real()) << ' '
                << fmt17(curve.domain[k].imag()) << '\n';
            if (!curve.hollow.empty()) {
                out << "v " << fmt17(curve.hollow[k][0]) << ' ' << fmt17(curve.hollow[k][1])
                    << ' ' << fmt17(curve.hollow[k][2]) << '\n';
            } else {
                out << "v " << fmt17(curve.domain[k].real()) << ' '
                    << fmt17(curve.domain[k].imag()) << " 0\n";
            }
        }
        out << "l";
        for (std::size_t k = 0; k < nv; ++k) out << ' ' << base + k;
        out << '\n';
        base += nv;
    }
    if (!out) throw IoError("export_curves: write failed for '" + path + "'");
}

json to_json(const AnalysisReport& r) {
    json j;
    j["scene"] = r.scene;
    j["osserman"] = osserman_json(r.osserman);
    j["diagnostics"] = {{"ode_steps_accepted", r.stats.accepted},
                        {"ode_steps_rejected", r.stats.rejected},
                        {"det_repairs", r.stats.det_repairs}};
    return j;
}

AnalysisReport report_from_json(const json& j) {
    AnalysisReport r;
    r.scene = j.at("scene");
    r.osserman = osserman_from(j.at("osserman"));
    r.stats.accepted = j.at("diagnostics").at("ode_steps_accepted").get<long>();
    r.stats.rejected = j.at("diagnostics").at("ode_steps_rejected").get<long>();
    r.stats.det_repairs = j.at("diagnostics").at("det_repairs").get<long>();
    return r;
}

bool report_equal(const AnalysisReport& a, const AnalysisReport& b) {
    return to_json(a) == to_json(b);
}

void write_report(const AnalysisReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_report: cannot open '" + path + "'");
    out << to_json(r).dump(2) << '\n';
    if (!out) throw IoError("write_report: write failed for '" + path + "'");
}

AnalysisReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_report: cannot open '" + path + "'");
    json j;
    in >> j;
    return report_from_json(j);
}

} // namespace cmcface
