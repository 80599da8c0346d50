#include "cmcface/path.hpp"

#include <cmath>

namespace cmcface {

cplx PathSegment::point(double t) const {
    if (kind == Kind::Line) return a + t * (b - a);
    const double ang = ang0 + t * (ang1 - ang0);
    return center + std::polar(radius, ang);
}

cplx PathSegment::velocity(double t) const {
    if (kind == Kind::Line) return b - a;
    const double ang = ang0 + t * (ang1 - ang0);
    return cplx(0, 1) * std::polar(radius, ang) * (ang1 - ang0);
}

double PathSegment::length() const {
    if (kind == Kind::Line) return std::abs(b - a);
    return radius * std::abs(ang1 - ang0);
}

double PathSegment::distance(cplx p) const {
    if (kind == Kind::Line) {
        const cplx d = b - a;
        const double len2 = std::norm(d);
        if (len2 == 0) return std::abs(p - a);
        double t = ((p - a) * std::conj(d)).real() / len2;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (a + t * d));
    }
    const cplx rel = p - center;
    const double r = std::abs(rel);
    // Is the angle of p covered by the arc (mod 2pi)?
    const double lo = std::min(ang0, ang1), hi = std::max(ang0, ang1);
    if (hi - lo >= 2.0 * M_PI) return std::abs(r - radius);
    double ang = std::arg(rel);
    while (ang < lo) ang += 2.0 * M_PI;
    if (ang <= hi) return std::abs(r - radius);
    return std::min(std::abs(p - point(0)), std::abs(p - point(1)));
}

PathSpec PathSpec::line(cplx from, cplx to) {
    PathSpec p;
    p.append(PathSegment::line(from, to));
    return p;
}

PathSpec PathSpec::polyline(const std::vector<cplx>& pts) {
    PathSpec p;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        p.append(PathSegment::line(pts[i], pts[i + 1]));
    return p;
}

PathSpec PathSpec::circle(cplx center, double radius, int turns) {
    PathSpec p;
    const int n = std::abs(turns) * 4;
    const double step = (turns >= 0 ? 1.0 : -1.0) * M_PI / 2.0;
    for (int k = 0; k < n; ++k)
        p.append(PathSegment::arc(center, radius, k * step, (k + 1) * step));
    return p;
}

PathSpec& PathSpec::append(const PathSegment& seg) {
    if (!segments_.empty() && std::abs(segments_.back().end() - seg.start()) > 1e-9)
        throw Error("PathSpec: discontinuous segment appended");
    segments_.push_back(seg);
    return *this;
}

PathSpec& PathSpec::append(const PathSpec& other) {
    for (const auto& s : other.segments_) append(s);
    return *this;
}

cplx PathSpec::start() const {
    if (segments_.empty()) throw Error("PathSpec: empty path has no start");
    return segments_.front().start();
}

cplx PathSpec::end() const {
    if (segments_.empty()) throw Error("PathSpec: empty path has no end");
    return segments_.back().end();
}

bool PathSpec::is_closed(double tol) const {
    return !segments_.empty() && std::abs(start() - end()) <= tol;
}

double PathSpec::length() const {
    double acc = 0;
    for (const auto& s : segments_) acc += s.length();
    return acc;
}

double PathSpec::min_distance(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : segments_) d = std::min(d, s.distance(p));
    return d;
}

void PathSpec::check_clearance(const std::vector<Puncture>& punctures,
                               double clearance) const {
    for (const auto& p : punctures) {
        if (p.infinite) continue;
        const double d = min_distance(p.z);
        if (d < clearance)
            throw SingularityOnPath("path passes within clearance of puncture " +
                                    to_string(p) + " (distance " + std::to_string(d) + ")");
    }
}

} // namespace cmcface
