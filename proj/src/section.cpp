#include "flowtopo/section.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace flowtopo {

std::string to_string(AdmissibleRegion region) {
    switch (region) {
        case AdmissibleRegion::X1: return "X1";
        case AdmissibleRegion::U: return "U";
        case AdmissibleRegion::FullPlane: return "full-plane";
    }
    return "unknown";
}

std::string to_string(CrossingKind kind) {
    switch (kind) {
        case CrossingKind::Up: return "up";
        case CrossingKind::Down: return "down";
        case CrossingKind::Tangent: return "tangent";
    }
    return "unknown";
}

SectionSpec SectionSpec::for_system(const SystemParams& params) {
    SectionSpec spec;
    switch (params.kind) {
        case SystemKind::NoseHoover: spec.admissible_region = AdmissibleRegion::X1; break;
        case SystemKind::MooreSpiegel: spec.admissible_region = AdmissibleRegion::U; break;
        default: spec.admissible_region = AdmissibleRegion::FullPlane; break;
    }
    return spec;
}

namespace {

void check_spec_matches(const SystemParams& params, const SectionSpec& spec) {
    if (spec.admissible_region == AdmissibleRegion::X1 && params.kind != SystemKind::NoseHoover)
        throw std::invalid_argument("section region X1 belongs to the Nose-Hoover system");
    if (spec.admissible_region == AdmissibleRegion::U && params.kind != SystemKind::MooreSpiegel)
        throw std::invalid_argument("section region U belongs to the Moore-Spiegel system");
}

SectionPoint make_point(const SystemParams& params, double t, const State& s) {
    SectionPoint p;
    p.t = t;
    p.state = s;
    p.state.y = 0.0;  // the located crossing satisfies |y| < 1e-12; store it flat
    p.x = s.x;
    p.z = s.z;
    double normal = eval_field(params, p.state).y;
    p.speed = std::abs(normal);
    p.kind = (p.speed < kTangencySpeed) ? CrossingKind::Tangent
             : (normal > 0.0)           ? CrossingKind::Up
                                        : CrossingKind::Down;
    return p;
}

}  // namespace

SectionPoint section_point_from_plane(const SystemParams& params, double x, double z) {
    return make_point(params, 0.0, State{x, 0.0, z});
}

std::vector<SectionPoint> detect_crossings(const Trajectory& traj, const SectionSpec& spec) {
    check_spec_matches(traj.params(), spec);
    auto events = locate_event(
        traj, [](const State& s) { return s.y; }, EventDirection::Any);
    std::vector<SectionPoint> out;
    out.reserve(events.size());
    for (const auto& ev : events) out.push_back(make_point(traj.params(), ev.t, ev.state));
    return out;
}

tangent_encounter_error::tangent_encounter_error(const std::string& message, SectionPoint point)
    : std::runtime_error(message), point_(std::move(point)) {}

no_return_error::no_return_error(const std::string& message, Fate fate)
    : std::runtime_error(message), fate_(fate) {}

namespace {

void check_return_preconditions(const SystemParams& params, const SectionPoint& p,
                                const SectionSpec& spec) {
    check_spec_matches(params, spec);
    if (std::abs(p.state.y) > kSectionPlaneTol)
        throw std::invalid_argument("first_return: point is not on the plane y = 0");
    if (p.kind != CrossingKind::Up || p.speed <= kTangencySpeed)
        throw std::invalid_argument(
            "first_return: point must be a transverse Up crossing (it lies on or beyond the "
            "tangency line)");
    if (!spec.admits(p.state))
        throw std::invalid_argument("first_return: point is outside the admissible region");
}

}  // namespace

std::variant<SectionPoint, Fate> first_return(const SystemParams& params, const SectionPoint& p,
                                              const SectionSpec& spec,
                                              const IntegratorConfig& cfg) {
    check_return_preconditions(params, p, spec);

    double horizon = std::min(25.0, cfg.t_max);
    for (;;) {
        Trajectory traj = integrate(params, p.state, {0.0, horizon}, cfg);
        auto crossings = detect_crossings(traj, spec);
        for (const auto& c : crossings) {
            if (c.kind == CrossingKind::Tangent)
                throw tangent_encounter_error(
                    "first_return: tangent section hit before the return", c);
            if (c.kind == CrossingKind::Up && spec.admits(c.state)) return c;
        }
        if (traj.termination() && traj.termination()->tag == FateKind::Escaped)
            return *traj.termination();
        if (horizon >= cfg.t_max) {
            Fate fate;
            fate.tag = FateKind::Bounded;
            fate.t = traj.t_end();
            fate.state = traj.state_at(traj.size() - 1);
            return fate;
        }
        horizon = std::min(2.0 * horizon, cfg.t_max);
    }
}

ReturnResult first_return_strict(const SystemParams& params, const SectionPoint& p,
                                 const SectionSpec& spec, const IntegratorConfig& cfg) {
    auto res = first_return(params, p, spec, cfg);
    if (std::holds_alternative<Fate>(res))
        throw no_return_error("first_return: orbit left the section machinery (" +
                                  to_string(std::get<Fate>(res).tag) + ")",
                              std::get<Fate>(res));
    ReturnResult out;
    out.point = std::get<SectionPoint>(res);
    out.return_time = out.point.t;
    return out;
}

double det2(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Matrix2 mul2(const Matrix2& a, const Matrix2& b) {
    Matrix2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

namespace {

ReturnJacobian finite_difference_jacobian(const SystemParams& params, const SectionPoint& p,
                                          const SectionSpec& spec, const IntegratorConfig& cfg) {
    const double h = 1e-6;
    ReturnJacobian out;
    out.ret = first_return_strict(params, p, spec, cfg);

    auto returned = [&](double x, double z) {
        SectionPoint q = section_point_from_plane(params, x, z);
        return first_return_strict(params, q, spec, cfg).point;
    };

    SectionPoint xp = returned(p.x + h, p.z), xm = returned(p.x - h, p.z);
    SectionPoint zp = returned(p.x, p.z + h), zm = returned(p.x, p.z - h);
    out.matrix[0][0] = (xp.x - xm.x) / (2.0 * h);
    out.matrix[1][0] = (xp.z - xm.z) / (2.0 * h);
    out.matrix[0][1] = (zp.x - zm.x) / (2.0 * h);
    out.matrix[1][1] = (zp.z - zm.z) / (2.0 * h);
    return out;
}

// First-variation system: 3 state components followed by the fundamental
// matrix in row-major order, M[i][j] = d state_i / d s0_j.
ReturnJacobian variational_jacobian(const SystemParams& params, const SectionPoint& p,
                                    const SectionSpec& spec, const IntegratorConfig& cfg) {
    auto rhs = [&](const rk::VecN<12>& v) -> rk::VecN<12> {
        State s{v[0], v[1], v[2]};
        State f = eval_field(params, s);
        Matrix3 jac = eval_jacobian(params, s);
        rk::VecN<12> out;
        out[0] = f.x;
        out[1] = f.y;
        out[2] = f.z;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double v_ij = 0.0;
                for (int k = 0; k < 3; ++k) v_ij += jac[i][k] * v[3 + 3 * k + j];
                out[3 + 3 * i + j] = v_ij;
            }
        return out;
    };

    rk::StepControl ctl;
    ctl.rel_tol = cfg.rel_tol;
    ctl.abs_tol = cfg.abs_tol;
    ctl.max_step = cfg.max_step;
    ctl.escape_norm = cfg.escape_radius;

    rk::VecN<12> y0{};
    y0[0] = p.state.x;
    y0[1] = 0.0;
    y0[2] = p.state.z;
    y0[3 + 0] = 1.0;
    y0[3 + 4] = 1.0;
    y0[3 + 8] = 1.0;

    double horizon = std::min(25.0, cfg.t_max);
    for (;;) {
        auto sol = rk::integrate_dopri5<12>(rhs, y0, 0.0, horizon, ctl);
        auto changes = rk::find_sign_changes(sol, [](const rk::VecN<12>& v) { return v[1]; });
        for (const auto& ch : changes) {
            auto v = sol.evaluate(ch.t);
            State s{v[0], 0.0, v[2]};
            double normal = eval_field(params, s).y;
            if (std::abs(normal) < kTangencySpeed)
                throw tangent_encounter_error("return_map_jacobian: tangent section hit",
                                              make_point(params, ch.t, s));
            if (normal > 0.0 && spec.admits(s)) {
                Matrix3 M;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) M[i][j] = v[3 + 3 * i + j];
                State f_end = eval_field(params, s);
                // Project the fundamental matrix through the crossing
                // condition y = 0: columns are the in-plane directions x, z
                // and the row correction removes the flight-time variation.
                ReturnJacobian out;
                int rows[2] = {0, 2}, cols[2] = {0, 2};
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        int i = rows[a], j = cols[b];
                        double fi = (i == 0) ? f_end.x : f_end.z;
                        out.matrix[a][b] = M[i][j] - fi * M[1][j] / f_end.y;
                    }
                out.ret.point = make_point(params, ch.t, s);
                out.ret.return_time = ch.t;
                return out;
            }
        }
        if (sol.stop == rk::StopReason::Escaped)
            throw no_return_error("return_map_jacobian: orbit escaped",
                                  Fate{FateKind::Escaped, sol.t_end(),
                                       State{sol.states.back()[0], sol.states.back()[1],
                                             sol.states.back()[2]}});
        if (sol.stop == rk::StopReason::StepUnderflow)
            throw std::runtime_error("return_map_jacobian: step size underflow");
        if (horizon >= cfg.t_max)
            throw no_return_error("return_map_jacobian: no return before t_max",
                                  Fate{FateKind::Bounded, sol.t_end(),
                                       State{sol.states.back()[0], sol.states.back()[1],
                                             sol.states.back()[2]}});
        horizon = std::min(2.0 * horizon, cfg.t_max);
    }
}

}  // namespace

ReturnJacobian return_map_jacobian(const SystemParams& params, const SectionPoint& p,
                                   const SectionSpec& spec, JacobianMethod method,
                                   const IntegratorConfig& cfg) {
    check_return_preconditions(params, p, spec);
    return (method == JacobianMethod::FiniteDifference)
               ? finite_difference_jacobian(params, p, spec, cfg)
               : variational_jacobian(params, p, spec, cfg);
}

std::string section_points_csv(const std::vector<SectionPoint>& points) {
    std::ostringstream os;
    os << "t,x,z,speed,kind\n";
    char buf[160];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%s\n", p.t, p.x, p.z, p.speed,
                      to_string(p.kind).c_str());
        os << buf;
    }
    return os.str();
}

}  // namespace flowtopo
