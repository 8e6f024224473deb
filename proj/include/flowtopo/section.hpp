#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "flowtopo/ode.hpp"

namespace flowtopo {

/// Crossing speed below which a section hit is treated as tangent; the
/// return map is not reliably defined at such points.
inline constexpr double kTangencySpeed = 1e-8;

enum class AdmissibleRegion {
    X1,        // x < 0 on the plane y = 0 (Nose-Hoover inflow half)
    U,         // z > 0 on the plane y = 0 (Moore-Spiegel inflow half)
    FullPlane
};

std::string to_string(AdmissibleRegion region);

/// Poincare section on the plane y = 0. Crossings are classified by the
/// field's y-component: an Up crossing passes from y < 0 to y > 0, which is
/// exactly a passage from xdot < 0 to xdot > 0 for the systems studied here.
struct SectionSpec {
    AdmissibleRegion admissible_region = AdmissibleRegion::FullPlane;

    static SectionSpec for_system(const SystemParams& params);

    bool admits(const State& s) const {
        switch (admissible_region) {
            case AdmissibleRegion::X1: return s.x < 0.0;
            case AdmissibleRegion::U: return s.z > 0.0;
            case AdmissibleRegion::FullPlane: return true;
        }
        return false;
    }
};

enum class CrossingKind { Up, Down, Tangent };

std::string to_string(CrossingKind kind);

struct SectionPoint {
    double x = 0.0;
    double z = 0.0;
    double t = 0.0;      // crossing time along the generating trajectory
    State state{};
    double speed = 0.0;  // |field y-component| at the crossing
    CrossingKind kind = CrossingKind::Tangent;
};

/// All y = 0 crossings of the trajectory, in time order, classified Up,
/// Down or Tangent (speed below kTangencySpeed). Tangent crossings are
/// reported like any other, never dropped.
std::vector<SectionPoint> detect_crossings(const Trajectory& traj, const SectionSpec& spec);

/// Raised when the flow meets the section tangentially before completing a
/// return; carries the offending point.
class tangent_encounter_error : public std::runtime_error {
  public:
    tangent_encounter_error(const std::string& message, SectionPoint point);
    const SectionPoint& point() const { return point_; }

  private:
    SectionPoint point_;
};

/// First-return map of the flow on the admissible region: integrates from an
/// Up crossing to the next Up crossing. Returns the Fate instead when the
/// orbit escapes or runs past cfg.t_max without returning.
std::variant<SectionPoint, Fate> first_return(const SystemParams& params, const SectionPoint& p,
                                              const SectionSpec& spec,
                                              const IntegratorConfig& cfg);

struct ReturnResult {
    SectionPoint point;
    double return_time = 0.0;
};

/// Like first_return, but always either produces the returned point or
/// throws; convenience for the orbit machinery.
ReturnResult first_return_strict(const SystemParams& params, const SectionPoint& p,
                                 const SectionSpec& spec, const IntegratorConfig& cfg);

class no_return_error : public std::runtime_error {
  public:
    no_return_error(const std::string& message, Fate fate);
    const Fate& fate() const { return fate_; }

  private:
    Fate fate_;
};

enum class JacobianMethod { FiniteDifference, Variational };

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct ReturnJacobian {
    Matrix2 matrix{};
    ReturnResult ret;  // the underlying return evaluated at the base point
};

/// Linearization of the first-return map in the section coordinates (x, z).
/// FiniteDifference uses central differences with step 1e-6; Variational
/// integrates the first-variation equations along the flow and projects the
/// fundamental matrix onto the section through the crossing condition.
ReturnJacobian return_map_jacobian(const SystemParams& params, const SectionPoint& p,
                                   const SectionSpec& spec, JacobianMethod method,
                                   const IntegratorConfig& cfg);

/// Builds a SectionPoint from plane coordinates; state is (x, 0, z) and the
/// crossing kind comes from the sign of the section normal component.
SectionPoint section_point_from_plane(const SystemParams& params, double x, double z);

double det2(const Matrix2& m);
Matrix2 mul2(const Matrix2& a, const Matrix2& b);

std::string section_points_csv(const std::vector<SectionPoint>& points);

}  // namespace flowtopo
