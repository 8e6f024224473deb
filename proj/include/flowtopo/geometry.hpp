#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace flowtopo {

/// Phase-space point. All analysis in this library happens in R^3.
struct State {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline State operator+(State a, const State& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline State operator-(State a, const State& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline State operator-(State a) { return {-a.x, -a.y, -a.z}; }
inline State operator*(double c, State a) { return {c * a.x, c * a.y, c * a.z}; }
inline State operator*(State a, double c) { return c * a; }

inline double dot(const State& a, const State& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline State cross(const State& a, const State& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const State& a) { return std::sqrt(dot(a, a)); }

/// Direction on the unit sphere, polar angle theta in [0, pi] from the
/// +z axis and azimuth psi in [0, 2*pi).
struct SphericalDirection {
    double theta = 0.0;
    double psi = 0.0;

    SphericalDirection() = default;
    SphericalDirection(double theta_, double psi_) : theta(theta_), psi(psi_) {
        if (!(theta >= 0.0 && theta <= M_PI))
            throw std::domain_error("SphericalDirection: theta outside [0, pi]");
        if (!(psi >= 0.0 && psi < 2.0 * M_PI))
            throw std::domain_error("SphericalDirection: psi outside [0, 2*pi)");
    }

    State unit() const {
        return {std::sin(theta) * std::cos(psi), std::sin(theta) * std::sin(psi), std::cos(theta)};
    }
};

/// Axis-aligned box used for fixed-point searches.
struct Box {
    State lo;
    State hi;

    bool finite() const { return lo.finite() && hi.finite(); }
    bool contains(const State& s, double slack = 0.0) const {
        return s.x >= lo.x - slack && s.x <= hi.x + slack && s.y >= lo.y - slack &&
               s.y <= hi.y + slack && s.z >= lo.z - slack && s.z <= hi.z + slack;
    }
};

}  // namespace flowtopo
