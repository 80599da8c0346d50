#ifndef CMCFACE_PATH_HPP
#define CMCFACE_PATH_HPP

#include <vector>

#include "cmcface/expr.hpp"

namespace cmcface {

/// Line segment or circular arc in the plane.  Arcs run counterclockwise
/// when ang1 > ang0 and may subtend any angle.
struct PathSegment {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    cplx a{}, b{};          // line endpoints
    cplx center{};          // arc
    double radius = 0, ang0 = 0, ang1 = 0;

    static PathSegment line(cplx from, cplx to) {
        PathSegment s;
        s.kind = Kind::Line;
        s.a = from;
        s.b = to;
        return s;
    }
    static PathSegment arc(cplx center, double radius, double ang0, double ang1) {
        PathSegment s;
        s.kind = Kind::Arc;
        s.center = center;
        s.radius = radius;
        s.ang0 = ang0;
        s.ang1 = ang1;
        return s;
    }

    cplx point(double t) const;       // t in [0,1]
    cplx velocity(double t) const;    // d point / dt
    double length() const;
    cplx start() const { return point(0); }
    cplx end() const { return point(1); }

    /// Euclidean distance from p to the segment.
    double distance(cplx p) const;
};

/// Piecewise path made of continuous segments.
class PathSpec {
public:
    PathSpec() = default;

    static PathSpec line(cplx from, cplx to);
    static PathSpec polyline(const std::vector<cplx>& pts);
    /// Circle about `center`, starting at center + radius (positive real
    /// side), split into four quarter arcs per turn.  turns < 0 runs
    /// clockwise.
    static PathSpec circle(cplx center, double radius, int turns = 1);

    PathSpec& append(const PathSegment& seg);
    PathSpec& append(const PathSpec& other);

    const std::vector<PathSegment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    cplx start() const;
    cplx end() const;
    bool is_closed(double tol = 1e-12) const;
    double length() const;

    double min_distance(cplx p) const;

    /// Throws SingularityOnPath if any declared finite puncture lies within
    /// `clearance` of the path.
    void check_clearance(const std::vector<Puncture>& punctures, double clearance) const;

private:
    std::vector<PathSegment> segments_;
};

} // namespace cmcface

#endif // CMCFACE_PATH_HPP
