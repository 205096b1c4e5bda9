#include "acbell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "acbell/errors.hpp"

namespace acbell::geom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Minimum endpoint distance from the puncture below which the quadrature's
// fixed-order rule can no longer be trusted.
constexpr double kQuadratureProximityLimit = 1e-6;

void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

void check_point(Vec2 p, const char* name) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw std::invalid_argument(std::string(name) + " must have finite coordinates");
    }
}

void check_polyline(const Polyline& path) {
    if (path.points.size() < 2) {
        throw std::invalid_argument("polyline needs at least 2 points");
    }
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        check_point(path.points[i], "polyline point");
        if (i > 0 && norm(path.points[i] - path.points[i - 1]) == 0.0) {
            throw std::invalid_argument("polyline has coincident consecutive points at index " +
                                        std::to_string(i));
        }
    }
}

void check_sign(int s, const char* name) {
    if (s != +1 && s != -1) {
        throw std::invalid_argument(std::string(name) + " must be +1 or -1");
    }
}

void check_moment(const MagneticMoment& m) {
    check_finite(m.magnitude, "moment magnitude");
    if (m.magnitude < 0.0) {
        throw std::invalid_argument("moment magnitude must be non-negative");
    }
    check_sign(m.sign, "moment sign");
}

void check_charge(const LineCharge& c) {
    check_finite(c.lambda, "charge density lambda");
    check_point(c.puncture, "puncture");
    check_sign(c.axis_sign, "axis_sign");
}

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

QuadratureRule gauss_legendre(int n) {
    if (n < 1) {
        throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    }
    QuadratureRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    // Newton iteration on the Legendre recurrence; roots come in +- pairs.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            deriv = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / deriv;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

double min_distance_to_segment(Vec2 a, Vec2 b, Vec2 p) {
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) {
        return norm(p - a);
    }
    const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return norm(p - (a + d * t));
}

Vec2 electric_field_at(const LineCharge& charge, Vec2 p) {
    check_charge(charge);
    check_point(p, "field point");
    const Vec2 u = p - charge.puncture;
    const double r = norm(u);
    if (r <= kSingularDistance) {
        throw SingularityError("field requested at the line-charge puncture");
    }
    return u * (charge.lambda / (kTwoPi * r * r));
}

double segment_swept_angle(Vec2 a, Vec2 b, Vec2 origin) {
    check_point(a, "segment start");
    check_point(b, "segment end");
    check_point(origin, "origin");
    if (min_distance_to_segment(a, b, origin) <= kSingularDistance) {
        throw SingularityError("segment passes through the puncture");
    }
    const Vec2 u = a - origin;
    const Vec2 v = b - origin;
    return std::atan2(cross(u, v), dot(u, v));
}

double path_swept_angle(const Polyline& path, Vec2 origin) {
    check_polyline(path);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        total += segment_swept_angle(path.points[i], path.points[i + 1], origin);
    }
    return total;
}

double ac_phase_analytic(const Polyline& path, const MagneticMoment& moment,
                         const LineCharge& charge) {
    check_moment(moment);
    check_charge(charge);
    const double coefficient =
        moment.sign * charge.axis_sign * moment.magnitude * charge.lambda / kTwoPi;
    return coefficient * path_swept_angle(path, charge.puncture);
}

double ac_phase_quadrature(const Polyline& path, const MagneticMoment& moment,
                           const LineCharge& charge, int nodes_per_segment) {
    check_moment(moment);
    check_charge(charge);
    check_polyline(path);
    if (nodes_per_segment < 2) {
        throw std::invalid_argument("quadrature needs at least 2 nodes per segment");
    }
    const QuadratureRule rule = gauss_legendre(nodes_per_segment);
    const double kappa = moment.sign * charge.axis_sign * moment.magnitude;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const Vec2 a = path.points[i];
        const Vec2 b = path.points[i + 1];
        if (min_distance_to_segment(a, b, charge.puncture) <= kSingularDistance) {
            throw SingularityError("segment " + std::to_string(i) +
                                   " passes through the puncture");
        }
        if (norm(a - charge.puncture) < kQuadratureProximityLimit ||
            norm(b - charge.puncture) < kQuadratureProximityLimit) {
            throw AccuracyError("segment " + std::to_string(i) +
                                " endpoint closer than 1e-6 to the puncture; "
                                "quadrature truncation error too large");
        }
        const Vec2 d = b - a;
        double seg = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double t = 0.5 * (rule.nodes[k] + 1.0);
            const Vec2 u = (a + d * t) - charge.puncture;
            // Azimuthal coupling of the moment with the radial field:
            // rotating E by a quarter turn gives lambda/(2 pi r^2) * (-u_y, u_x).
            seg += rule.weights[k] * cross(u, d) * (charge.lambda / (kTwoPi * dot(u, u)));
        }
        total += 0.5 * seg;  // jacobian of [-1,1] -> [0,1]
    }
    return kappa * total;
}

int winding_number(const Polyline& path, Vec2 origin) {
    check_polyline(path);
    if (norm(path.points.front() - path.points.back()) > kSingularDistance) {
        throw std::invalid_argument("winding number requires a closed polyline");
    }
    const double turns = path_swept_angle(path, origin) / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 1e-9) {
        throw AccuracyError("swept angle of closed path is not an integer number of turns");
    }
    return static_cast<int>(rounded);
}

PathValidation validate_path(const Polyline& path, const LineCharge& charge,
                             double exclusion_radius) {
    check_polyline(path);
    check_charge(charge);
    if (!std::isfinite(exclusion_radius) || exclusion_radius < 0.0) {
        throw std::invalid_argument("exclusion radius must be finite and non-negative");
    }
    PathValidation result;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const double d =
            min_distance_to_segment(path.points[i], path.points[i + 1], charge.puncture);
        if (d <= exclusion_radius) {
            result.ok = false;
            result.violations.push_back({i, d});
        }
    }
    return result;
}

}  // namespace acbell::geom
