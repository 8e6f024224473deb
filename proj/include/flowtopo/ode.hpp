#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flowtopo/fields.hpp"
#include "flowtopo/geometry.hpp"
#include "flowtopo/rk.hpp"

namespace flowtopo {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1e6;
    double t_max = 1e3;
    double escape_radius = 1e3;

    void validate() const;
};

enum class FateKind { Bounded, Escaped, ConvergedToFixedPoint, OnInvariantLine };

std::string to_string(FateKind kind);

struct Fate {
    FateKind tag = FateKind::Bounded;
    double t = 0.0;   // time at which the fate was determined
    State state{};    // state at that time
};

/// A numerically integrated solution curve with per-step dense output.
/// Immutable after construction; evaluation at sample times reproduces the
/// stored samples exactly.
class Trajectory {
  public:
    Trajectory(SystemParams params, rk::Solution<3> solution, IntegratorConfig cfg,
               std::optional<Fate> termination = std::nullopt);

    const SystemParams& params() const { return params_; }
    const IntegratorConfig& config() const { return config_; }

    double t_begin() const { return solution_.t_begin(); }
    double t_end() const { return solution_.t_end(); }
    std::size_t size() const { return solution_.times.size(); }

    double time_at(std::size_t i) const { return solution_.times[i]; }
    State state_at(std::size_t i) const;
    State derivative_at(std::size_t i) const;

    State evaluate(double t) const;

    /// Fate recorded by integrate() when the run terminated early (escape).
    const std::optional<Fate>& termination() const { return termination_; }

    const rk::Solution<3>& raw() const { return solution_; }

  private:
    SystemParams params_;
    rk::Solution<3> solution_;
    IntegratorConfig config_;
    std::optional<Fate> termination_;
};

/// Raised when the adaptive step size underflows (blow-up in finite time or
/// loss of smoothness); carries the partial trajectory computed so far.
class integration_error : public std::runtime_error {
  public:
    integration_error(const std::string& message, Trajectory partial);
    const Trajectory& partial() const { return partial_; }

  private:
    Trajectory partial_;
};

class event_refinement_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integrates the system forward over t_span (t_span.second > t_span.first).
/// Backward motion is expressed by integrating the negated field; see
/// integrate_negated(). Terminates early with an Escaped fate when the state
/// norm reaches cfg.escape_radius.
Trajectory integrate(const SystemParams& params, const State& s0,
                     std::pair<double, double> t_span, const IntegratorConfig& cfg);

/// Same contract, for the time-reversed flow (field negated pointwise).
Trajectory integrate_negated(const SystemParams& params, const State& s0,
                             std::pair<double, double> t_span, const IntegratorConfig& cfg);

enum class EventDirection { Rising, Falling, Any };

struct Event {
    double t = 0.0;
    State state{};
    bool rising = false;
};

/// All sign changes of `event` along the trajectory in the requested
/// direction, refined to |event(state)| < 1e-12. Sign changes located
/// exactly at the start time are excluded.
std::vector<Event> locate_event(const Trajectory& traj,
                                const std::function<double(const State&)>& event,
                                EventDirection direction);

/// Forward-time fate of an initial condition:
///   OnInvariantLine  s0 lies on a known invariant line (1e-12 tolerance),
///   Escaped          |state| reached cfg.escape_radius before t_max,
///   ConvergedToFixedPoint  stayed within 1e-8 of a known fixed point for
///                          10 consecutive time units,
///   Bounded          none of the above by t_max.
Fate classify_fate(const SystemParams& params, const State& s0, const IntegratorConfig& cfg);

/// Window length (time units) a state must remain near a fixed point for the
/// ConvergedToFixedPoint verdict; recorded here so reports can cite it.
inline constexpr double kFixedPointDwellTime = 10.0;
inline constexpr double kFixedPointRadius = 1e-8;
inline constexpr double kInvariantLineTol = 1e-12;

/// Writes the trajectory samples as CSV (`t,x,y,z`, scientific notation,
/// 17 significant digits).
std::string trajectory_csv(const Trajectory& traj);

}  // namespace flowtopo
