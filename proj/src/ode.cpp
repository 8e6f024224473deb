#include "flowtopo/ode.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace flowtopo {

void IntegratorConfig::validate() const {
    if (!(rel_tol >= 1e-14)) throw std::domain_error("rel_tol must be >= 1e-14");
    if (!(abs_tol > 0.0)) throw std::domain_error("abs_tol must be positive");
    if (!(max_step > 0.0)) throw std::domain_error("max_step must be positive");
    if (!(t_max > 0.0)) throw std::domain_error("t_max must be positive");
    if (!(escape_radius > 0.0)) throw std::domain_error("escape_radius must be positive");
}

std::string to_string(FateKind kind) {
    switch (kind) {
        case FateKind::Bounded: return "bounded";
        case FateKind::Escaped: return "escaped";
        case FateKind::ConvergedToFixedPoint: return "converged-to-fixed-point";
        case FateKind::OnInvariantLine: return "on-invariant-line";
    }
    return "unknown";
}

Trajectory::Trajectory(SystemParams params, rk::Solution<3> solution, IntegratorConfig cfg,
                       std::optional<Fate> termination)
    : params_(std::move(params)),
      solution_(std::move(solution)),
      config_(cfg),
      termination_(std::move(termination)) {}

State Trajectory::state_at(std::size_t i) const {
    const auto& v = solution_.states[i];
    return {v[0], v[1], v[2]};
}

State Trajectory::derivative_at(std::size_t i) const {
    const auto& v = solution_.derivatives[i];
    return {v[0], v[1], v[2]};
}

State Trajectory::evaluate(double t) const {
    auto v = solution_.evaluate(t);
    return {v[0], v[1], v[2]};
}

integration_error::integration_error(const std::string& message, Trajectory partial)
    : std::runtime_error(message), partial_(std::move(partial)) {}

namespace {

rk::VecN<3> to_vec(const State& s) { return {s.x, s.y, s.z}; }
State to_state(const rk::VecN<3>& v) { return {v[0], v[1], v[2]}; }

Trajectory integrate_impl(const SystemParams& params, const State& s0,
                          std::pair<double, double> t_span, const IntegratorConfig& cfg,
                          bool negate) {
    params.validate();
    cfg.validate();
    if (!s0.finite()) throw std::domain_error("integrate: non-finite initial state");
    if (!(t_span.second > t_span.first))
        throw std::invalid_argument("integrate: t_span must be increasing");

    rk::StepControl ctl;
    ctl.rel_tol = cfg.rel_tol;
    ctl.abs_tol = cfg.abs_tol;
    ctl.max_step = cfg.max_step;
    ctl.escape_norm = cfg.escape_radius;

    auto rhs = [&](const rk::VecN<3>& v) -> rk::VecN<3> {
        State f = eval_field(params, to_state(v));
        if (negate) return {-f.x, -f.y, -f.z};
        return to_vec(f);
    };

    auto sol = rk::integrate_dopri5<3>(rhs, to_vec(s0), t_span.first, t_span.second, ctl);
    std::optional<Fate> termination;
    if (sol.stop == rk::StopReason::Escaped)
        termination = Fate{FateKind::Escaped, sol.t_end(), to_state(sol.states.back())};
    Trajectory traj(params, std::move(sol), cfg, termination);
    if (traj.raw().stop == rk::StopReason::StepUnderflow)
        throw integration_error("step size underflow (blow-up or loss of accuracy)",
                                std::move(traj));
    return traj;
}

}  // namespace

Trajectory integrate(const SystemParams& params, const State& s0,
                     std::pair<double, double> t_span, const IntegratorConfig& cfg) {
    return integrate_impl(params, s0, t_span, cfg, false);
}

Trajectory integrate_negated(const SystemParams& params, const State& s0,
                             std::pair<double, double> t_span, const IntegratorConfig& cfg) {
    return integrate_impl(params, s0, t_span, cfg, true);
}

std::vector<Event> locate_event(const Trajectory& traj,
                                const std::function<double(const State&)>& event,
                                EventDirection direction) {
    auto g = [&](const rk::VecN<3>& v) { return event(to_state(v)); };
    std::vector<rk::SignChange> changes;
    try {
        changes = rk::find_sign_changes(traj.raw(), g);
    } catch (const rk::refinement_error& err) {
        throw event_refinement_error(err.what());
    }
    std::vector<Event> out;
    for (const auto& ch : changes) {
        if (direction == EventDirection::Rising && !ch.rising) continue;
        if (direction == EventDirection::Falling && ch.rising) continue;
        Event ev;
        ev.t = ch.t;
        ev.state = traj.evaluate(ch.t);
        ev.rising = ch.rising;
        out.push_back(ev);
    }
    return out;
}

namespace {

/// Distance from s to the invariant line of the system, when one is known.
/// Nose-Hoover is tangent to the z-axis, and the Hopf fixture's z-axis is
/// invariant as well; Moore-Spiegel has no known invariant straight line.
std::optional<double> invariant_line_distance(const SystemParams& params, const State& s) {
    switch (params.kind) {
        case SystemKind::NoseHoover:
        case SystemKind::ValidationHopf:
            return std::hypot(s.x, s.y);
        default:
            return std::nullopt;
    }
}

std::vector<State> known_fixed_points(const SystemParams& params) {
    switch (params.kind) {
        case SystemKind::MooreSpiegel:
            if (params.T != 0.0) return {State{0.0, 0.0, 0.0}};
            return {};
        case SystemKind::ValidationHopf:
            return {State{0.0, 0.0, 0.0}};
        case SystemKind::Custom: {
            // no closed-form knowledge; census a moderate box once per call
            std::vector<State> out;
            for (const auto& fp : fixed_points(params, Box{{-10, -10, -10}, {10, 10, 10}}))
                out.push_back(fp.location);
            return out;
        }
        default:
            return {};
    }
}

}  // namespace

Fate classify_fate(const SystemParams& params, const State& s0, const IntegratorConfig& cfg) {
    params.validate();
    cfg.validate();

    if (auto dist = invariant_line_distance(params, s0); dist && *dist <= kInvariantLineTol) {
        return Fate{FateKind::OnInvariantLine, 0.0, s0};
    }

    Trajectory traj = integrate(params, s0, {0.0, cfg.t_max}, cfg);
    if (traj.termination() && traj.termination()->tag == FateKind::Escaped)
        return *traj.termination();

    auto fps = known_fixed_points(params);
    if (!fps.empty()) {
        // first sample index from which the state never leaves the ball of
        // radius kFixedPointRadius around a fixed point
        for (const State& fp : fps) {
            std::size_t n = traj.size();
            std::ptrdiff_t enter = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (norm(traj.state_at(i) - fp) <= kFixedPointRadius) {
                    if (enter < 0) enter = static_cast<std::ptrdiff_t>(i);
                } else {
                    enter = -1;
                }
            }
            if (enter >= 0) {
                double t_enter = traj.time_at(static_cast<std::size_t>(enter));
                if (traj.t_end() - t_enter >= kFixedPointDwellTime) {
                    return Fate{FateKind::ConvergedToFixedPoint, t_enter,
                                traj.state_at(static_cast<std::size_t>(enter))};
                }
            }
        }
    }

    return Fate{FateKind::Bounded, traj.t_end(), traj.state_at(traj.size() - 1)};
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t,x,y,z\n";
    char buf[128];
    for (std::size_t i = 0; i < traj.size(); ++i) {
        State s = traj.state_at(i);
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e\n", traj.time_at(i), s.x, s.y,
                      s.z);
        os << buf;
    }
    return os.str();
}

}  // namespace flowtopo
