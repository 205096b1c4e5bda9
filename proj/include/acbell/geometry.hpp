#pragma once

#include <cstddef>
#include <vector>

namespace acbell::geom {

// Points and segments closer to the puncture than this are treated as lying
// on the line charge itself.
inline constexpr double kSingularDistance = 1e-12;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

// Infinite straight charged line perpendicular to the motion plane, piercing
// it at `puncture`. Units are chosen so that one full counterclockwise
// encirclement by a moment of magnitude mu contributes a phase of mu*lambda.
struct LineCharge {
    double lambda = 0.0;  // charge per unit length
    Vec2 puncture;
    int axis_sign = +1;  // orientation of the line along the out-of-plane axis
};

// Out-of-plane magnetic moment of one particle.
struct MagneticMoment {
    double magnitude = 0.0;  // >= 0
    int sign = +1;  // +1 parallel, -1 antiparallel to the line-charge axis
};

// Trajectory in the motion plane: straight segments between ordered points.
struct Polyline {
    std::vector<Vec2> points;
};

struct PathViolation {
    std::size_t segment = 0;  // index of the offending segment
    double distance = 0.0;    // its minimum distance to the puncture
};

struct PathValidation {
    bool ok = true;
    std::vector<PathViolation> violations;
};

// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n);

double min_distance_to_segment(Vec2 a, Vec2 b, Vec2 p);

// Field of the line charge at p: (lambda / (2 pi r)) r_hat.
Vec2 electric_field_at(const LineCharge& charge, Vec2 p);

// Signed angle swept about `origin` by the straight segment a -> b, in
// (-pi, pi). Counterclockwise is positive.
double segment_swept_angle(Vec2 a, Vec2 b, Vec2 origin);

// Total signed angle swept about `origin` along the polyline. For a closed
// polyline this is 2 pi times the winding number.
double path_swept_angle(const Polyline& path, Vec2 origin);

// Phase accumulated by a moment carried along `path` in the field of
// `charge`: sign * axis_sign * (magnitude * lambda / 2 pi) * swept angle.
double ac_phase_analytic(const Polyline& path, const MagneticMoment& moment,
                         const LineCharge& charge);

// Same phase as a numerical line integral of the azimuthal moment-field
// coupling, fixed-order Gauss-Legendre per segment. Converges to
// ac_phase_analytic as nodes_per_segment grows.
double ac_phase_quadrature(const Polyline& path, const MagneticMoment& moment,
                           const LineCharge& charge, int nodes_per_segment);

// Winding count of a closed polyline (first point == last) about `origin`.
int winding_number(const Polyline& path, Vec2 origin);

// Impenetrability check: every segment must keep a distance greater than
// `exclusion_radius` from the puncture. Violations are reported, not thrown.
PathValidation validate_path(const Polyline& path, const LineCharge& charge,
                             double exclusion_radius);

}  // namespace acbell::geom
