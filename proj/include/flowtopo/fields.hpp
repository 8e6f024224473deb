#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowtopo/expr.hpp"
#include "flowtopo/geometry.hpp"

namespace flowtopo {

enum class SystemKind { NoseHoover, MooreSpiegel, ValidationHopf, Custom };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

/// Selects one of the built-in vector fields (or a parsed custom field)
/// together with its parameters.
///
///   NoseHoover:      xdot = y, ydot = -x - z*y, zdot = (y^2 - 1)/Q,  Q > 0
///   MooreSpiegel:    xdot = y, ydot = z, zdot = -z - (T - R + R*x^2)*y - T*x
///   ValidationHopf:  xdot = -omega*y + x*(mu - x^2 - y^2),
///                    ydot =  omega*x + y*(mu - x^2 - y^2), zdot = -z
///
/// ValidationHopf has a circular limit cycle of radius sqrt(mu) and period
/// 2*pi/omega, which makes it an exact fixture for the orbit machinery.
struct SystemParams {
    SystemKind kind = SystemKind::NoseHoover;
    double Q = 1.0;
    double T = 1.0;
    double R = 1.0;
    double mu = 1.0;
    double omega = 1.0;
    std::shared_ptr<const expr::FieldDef> custom;

    static SystemParams nose_hoover(double Q);
    static SystemParams moore_spiegel(double T, double R);
    static SystemParams validation_hopf(double mu, double omega);
    static SystemParams custom_field(std::shared_ptr<const expr::FieldDef> def);

    /// Throws std::domain_error when the parameter set is not usable
    /// (non-finite values, Q <= 0, mu/omega <= 0, missing custom field).
    void validate() const;

    /// True when Moore-Spiegel results that assume T > 0 and R > 0 apply.
    bool ms_standard_regime() const {
        return kind == SystemKind::MooreSpiegel && T > 0.0 && R > 0.0;
    }

    std::string describe() const;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

double det3(const Matrix3& m);
double trace3(const Matrix3& m);

/// Right-hand side of the selected system, evaluated exactly as written.
State eval_field(const SystemParams& params, const State& s);

/// Analytic Jacobian of the field (symbolic differentiation for custom fields).
Matrix3 eval_jacobian(const SystemParams& params, const State& s);

/// Spectral classification of a linearization; shared by the fixed-point
/// census and the Moore-Spiegel origin analysis.
enum class SpectrumKind { RealSaddle, SaddleFocus, CenterLike, Sink, Source, Degenerate };

std::string to_string(SpectrumKind kind);

struct SpectrumClass {
    std::array<std::complex<double>, 3> eigenvalues{};
    // Coefficients entering the Routh-Hurwitz test for the characteristic
    // polynomial lambda^3 + a*lambda^2 + b*lambda + c: (a, a*b - c, c).
    double rh_a = 0.0;
    double rh_ab_minus_c = 0.0;
    double rh_c = 0.0;
    SpectrumKind kind = SpectrumKind::Degenerate;
    // Angle between the invariant plane of the two leading eigenvalues and
    // the plane y = 0; meaningful for the Moore-Spiegel origin.
    double unstable_plane_section_angle = 0.0;

    double max_real_part() const;
};

/// Classifies a 3x3 linearization by its eigenvalue pattern.
SpectrumClass classify_matrix(const Matrix3& jac);

struct FixedPoint {
    State location;
    SpectrumClass spectrum;
    bool degenerate = false;  // |det J| below the nondegeneracy floor
};

/// All zeros of the field inside the box, found by grid seeding plus Newton
/// polish and deduplicated. Seeds whose Newton iteration diverges are
/// discarded silently; a zero with |det J| < 1e-10 is flagged degenerate.
std::vector<FixedPoint> fixed_points(const SystemParams& params, const Box& search_box);

/// F(p) . p/|p| at the spherical point (r, dir): the exact growth rate of
/// the radius along the flow, no truncation.
double radial_component(const SystemParams& params, double r, const SphericalDirection& dir);

struct RadialAsymptotic {
    double coefficient = 0.0;
    int order = 0;
};

/// Leading term of radial_component as r -> infinity, derived symbolically
/// from the right-hand sides:
///
///   NoseHoover:    cos(th) sin^2(th) sin^2(psi) (1 - Q)/Q * r^2,
///                  degenerating to exactly -cos(th)/Q (order 0) at Q = 1;
///   MooreSpiegel:  -R sin^3(th) cos^2(psi) sin(psi) cos(th) * r^3.
///
/// Only these two systems have pinned asymptotics; other kinds raise
/// unsupported_operation.
RadialAsymptotic radial_asymptotic_coefficient(const SystemParams& params,
                                               const SphericalDirection& dir);

class unsupported_operation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Tolerance used to decide that a state lies on the section plane y = 0.
inline constexpr double kSectionPlaneTol = 1e-12;

/// F(s) . (0, 1, 0) for s on the plane y = 0. Equals -x for Nose-Hoover and
/// z for Moore-Spiegel. Throws std::invalid_argument when |s.y| exceeds
/// kSectionPlaneTol.
double section_normal_component(const SystemParams& params, const State& s);

}  // namespace flowtopo
