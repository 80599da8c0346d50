#ifndef CMCFACE_EXPORT_HPP
#define CMCFACE_EXPORT_HPP

#include "cmcface/scene.hpp"

namespace cmcface {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a hash of the canonical scene document, as 16 hex digits.
std::string scene_hash(const nlohmann::json& echo);

/// Wavefront OBJ mesh in hollow-ball coordinates: one `v` line per sample
/// (row-major), quad faces per grid cell, faces touching failed samples
/// omitted.  Floats printed with 17 significant digits; byte-identical for
/// identical scenes.
void export_mesh(const SampleGrid& grid, const std::string& path,
                 const std::string& hash);

/// OBJ polylines (`l` elements) of the singular curves in hollow-ball
/// coordinates; the domain coordinates accompany each vertex as comments.
void export_curves(const std::vector<SingularCurve>& curves, const std::string& path,
                   const std::string& hash);

/// Full analysis output: scene echo, per-end records, the Osserman report
/// and integration diagnostics.
struct AnalysisReport {
    nlohmann::json scene;
    OssermanReport osserman;
    IntegrationStats stats;
};

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);
bool report_equal(const AnalysisReport& a, const AnalysisReport& b);

void write_report(const AnalysisReport& r, const std::string& path);
AnalysisReport read_report(const std::string& path);

} // namespace cmcface

#endif // CMCFACE_EXPORT_HPP
