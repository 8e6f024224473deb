#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "flowtopo/section.hpp"

namespace flowtopo {

struct PeriodicOrbit {
    std::vector<SectionPoint> section_points;  // the orbit's Up crossings, in flow order
    double period = 0.0;
    double residual = 0.0;  // |g^n(p) - p| in section coordinates
    std::array<std::complex<double>, 2> multipliers{};  // nontrivial Floquet multipliers
    int n_strands = 0;      // Up crossings per period
    Matrix2 monodromy{};    // product of the per-return Jacobians
};

class orbit_search_error : public std::runtime_error {
  public:
    orbit_search_error(const std::string& message, double best_residual, SectionPoint best_point)
        : std::runtime_error(message), best_residual_(best_residual), best_point_(best_point) {}
    double best_residual() const { return best_residual_; }
    const SectionPoint& best_point() const { return best_point_; }

  private:
    double best_residual_;
    SectionPoint best_point_;
};

/// Newton refinement of a fixed point of the n-th return map, seeded at
/// `guess`. Steps are damped (halved up to 8 times) whenever the residual
/// fails to decrease; the per-return Jacobians come from the variational
/// method and the monodromy is their product. Throws orbit_search_error
/// after 50 iterations without reaching residual 1e-9.
PeriodicOrbit find_periodic_orbit(const SystemParams& params, const SectionPoint& guess,
                                  const SectionSpec& spec, int n_return,
                                  const IntegratorConfig& cfg);

struct RecurrenceCandidate {
    SectionPoint point;
    int n_return = 0;
    double distance = 0.0;
};

/// Scans the trajectory's Up-crossing sequence for near-returns
/// |p_{i+n} - p_i| < radius, n = 1..max_shift, sorted by closeness.
std::vector<RecurrenceCandidate> recurrence_scan(const SystemParams& params,
                                                 const Trajectory& traj, const SectionSpec& spec,
                                                 double radius, int max_shift = 8);

enum class ManifoldBranchId { Delta1, Delta2 };

struct ManifoldViolation {
    double t = 0.0;
    State state{};
};

struct ManifoldBranch {
    ManifoldBranchId which = ManifoldBranchId::Delta1;
    double seed_offset = 0.0;  // epsilon along the stable eigenvector
    State seed{};
    std::vector<double> times;     // backward-time parameter, increasing
    std::vector<State> polyline;   // from near the origin outward
    double reached_norm = 0.0;
    // quadrant-containment violations beyond tolerance (empty when trapped)
    std::vector<ManifoldViolation> violations;
    // the traced flight, for dense resampling and export
    std::shared_ptr<const Trajectory> flight;
};

inline constexpr double kQuadrantTol = 1e-9;

/// Traces the two branches of the one-dimensional stable manifold of the
/// Moore-Spiegel origin by seeding at +/- epsilon along the real negative
/// eigenvector and integrating backward until the norm reaches
/// `reached_norm_target`. Delta1 is the branch entering {x > 0, y < 0}.
/// Containment violations are recorded on the branch, never silently
/// dropped. Requires T > 0, R > 0 and epsilon in [1e-8, 1e-4].
std::pair<ManifoldBranch, ManifoldBranch> trace_stable_manifold(const SystemParams& params,
                                                                double epsilon,
                                                                const IntegratorConfig& cfg,
                                                                double reached_norm_target = 100.0);

enum class SweepArc { L1, L2 };

enum class ExitSurface { H1, U, H2, SmallU, None };

std::string to_string(ExitSurface surface);
std::string to_string(SweepArc arc);

struct SweepRecord {
    double s = 0.0;
    std::optional<double> t_exit;
    State exit_state{};
    ExitSurface exit_surface = ExitSurface::None;
    bool containment_ok = true;
    std::optional<ManifoldViolation> violation;
};

struct SweepCurve {
    SystemParams params;
    SweepArc arc = SweepArc::L1;
    std::vector<SweepRecord> records;
};

/// For each s on the arc (l1 = {(s,0,0), s > 0}, l2 mirrored), integrates
/// forward and records the first hit of H1 u U (respectively H2 u u),
/// verifying the trajectory stays in the closed trapping quadrant until the
/// exit. A record with exit_surface None means t_max or escape came first.
SweepCurve exit_time_sweep(const SystemParams& params, SweepArc arc,
                           const std::vector<double>& s_values, const IntegratorConfig& cfg);

std::string sweep_csv(const SweepCurve& curve);

}  // namespace flowtopo
