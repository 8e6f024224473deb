#pragma once

#include <optional>
#include <vector>

#include "flowtopo/fields.hpp"

namespace flowtopo {

class degenerate_fixed_point_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ill_posed_degree_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class degree_resolution_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Index of a nondegenerate fixed point: the sign of the Jacobian
/// determinant. Requires |F(fp)| < 1e-10 and |det J| > 1e-10.
int analytic_index(const SystemParams& params, const State& fp);

struct IndexResult {
    State point{};                      // sphere center
    std::optional<int> analytic;        // defined when the center is a
                                        // nondegenerate fixed point
    int numerical_degree = 0;
    double raw_degree = 0.0;            // signed-area sum before rounding
    bool agreement = true;              // analytic == numerical when defined
    int subdivision = 0;
    double radius = 0.0;
};

/// Brouwer degree of F/|F| on the sphere of the given radius: the sphere is
/// triangulated by icosahedral subdivision (>= 4, i.e. >= 5120 triangles),
/// vertices are pushed through F/|F|, and the signed spherical areas of the
/// image triangles are summed and divided by 4*pi. Rounding to an integer
/// carries a 0.1 guard; a guard violation reports degree_resolution_error so
/// the caller can raise the subdivision.
IndexResult numerical_degree(const SystemParams& params, const State& center, double radius,
                             int subdivision);

/// Minimum angle between F/|F| and the given direction over a quasi-uniform
/// sample of at least `samples` sphere points (Fibonacci lattice, optionally
/// rotated by a seeded deterministic rotation). A strictly positive bound
/// certifies the direction map is not surjective, hence has degree 0.
double direction_avoidance(const SystemParams& params, double radius, const State& direction,
                           int samples, unsigned seed = 0);

/// Spectral classification of the Moore-Spiegel origin: numerically computed
/// eigenvalues, the exact Routh-Hurwitz triple (1, -R, T), and the angle
/// between the invariant plane of the two leading eigenvalues and the
/// section plane y = 0.
SpectrumClass classify_spectrum(const SystemParams& params, const State& fp);

/// Unit icosphere mesh produced by repeated edge-midpoint subdivision;
/// deterministic vertex and triangle order.
struct SphereMesh {
    std::vector<State> vertices;
    std::vector<std::array<int, 3>> triangles;
};

SphereMesh icosphere(int subdivision);

/// Signed solid angle of the spherical triangle (a, b, c), by the
/// Van Oosterom-Strackee formula.
double signed_solid_angle(const State& a, const State& b, const State& c);

}  // namespace flowtopo
