#ifndef CMCFACE_SCENE_HPP
#define CMCFACE_SCENE_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "cmcface/end_analysis.hpp"
#include "cmcface/surface.hpp"

namespace cmcface {

struct ToleranceBlock {
    double ode_rel = 1e-10;
    double ode_abs = 1e-12;
    double singular = 1e-6;
    double classify = 1e-9;
};

/// Validated scene configuration (JSON document, see docs/scene-format.md).
struct SceneSpec {
    // data source: built-in example or explicit expressions
    std::string example; // empty for explicit g/omega
    std::vector<double> params;
    std::string g_text, omega_text;
    std::map<std::string, double> parameters;
    std::vector<Puncture> punctures;
    cplx basepoint{};
    bool explicit_source = false;

    std::optional<double> lambda;
    std::optional<std::pair<cplx, cplx>> gauge; // (p, q)

    GridRegion region;
    std::size_t nu = 0, nv = 0;

    std::string mesh_path, curves_path, report_path;
    ToleranceBlock tol;

    nlohmann::json echo; // canonical echo of the parsed document
};

/// Parse and validate a scene document.  Unknown keys are rejected
/// (ValidationError); malformed JSON raises ParseError with line/column.
SceneSpec load_scene(const std::string& text);
SceneSpec load_scene_file(const std::string& path);

/// Construct the Weierstrass data of a scene (catalogue lookup or
/// expression parse), applying the gauge transform first and the
/// lambda-deformation second when both are present.
WeierstrassData build_data(const SceneSpec& scene);

IntegratorOptions integrator_options(const SceneSpec& scene);

} // namespace cmcface

#endif // CMCFACE_SCENE_HPP
