#include "flowtopo/orbits.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace flowtopo {

namespace {

struct ChainResult {
    std::vector<ReturnResult> returns;  // n entries
    std::vector<Matrix2> jacobians;     // per-return, same order
    double residual = 0.0;
};

// One evaluation of g^n from the plane point (x, z), with per-return
// variational Jacobians.
ChainResult evaluate_chain(const SystemParams& params, double x, double z,
                           const SectionSpec& spec, int n, const IntegratorConfig& cfg,
                           bool with_jacobians) {
    ChainResult out;
    SectionPoint cur = section_point_from_plane(params, x, z);
    for (int k = 0; k < n; ++k) {
        if (with_jacobians) {
            ReturnJacobian rj =
                return_map_jacobian(params, cur, spec, JacobianMethod::Variational, cfg);
            out.returns.push_back(rj.ret);
            out.jacobians.push_back(rj.matrix);
            cur = rj.ret.point;
        } else {
            ReturnResult rr = first_return_strict(params, cur, spec, cfg);
            out.returns.push_back(rr);
            cur = rr.point;
        }
    }
    double dx = cur.x - x, dz = cur.z - z;
    out.residual = std::hypot(dx, dz);
    return out;
}

std::array<std::complex<double>, 2> eigenvalues2(const Matrix2& m) {
    double tr = m[0][0] + m[1][1];
    double det = det2(m);
    std::complex<double> disc = std::complex<double>(tr * tr - 4.0 * det, 0.0);
    std::complex<double> root = std::sqrt(disc);
    return {0.5 * (tr + root), 0.5 * (tr - root)};
}

}  // namespace

PeriodicOrbit find_periodic_orbit(const SystemParams& params, const SectionPoint& guess,
                                  const SectionSpec& spec, int n_return,
                                  const IntegratorConfig& cfg) {
    if (n_return < 1) throw std::invalid_argument("find_periodic_orbit: n_return must be >= 1");
    const int max_iter = 50;
    const double target = 1e-9;

    double x = guess.x, z = guess.z;
    double best_res = std::numeric_limits<double>::infinity();
    SectionPoint best_point = guess;

    for (int it = 0; it < max_iter; ++it) {
        ChainResult chain = evaluate_chain(params, x, z, spec, n_return, cfg, true);
        if (chain.residual < best_res) {
            best_res = chain.residual;
            best_point = section_point_from_plane(params, x, z);
        }
        if (chain.residual < 1e-12 || (chain.residual < target && it > 0)) {
            PeriodicOrbit orbit;
            orbit.n_strands = n_return;
            orbit.residual = chain.residual;
            orbit.section_points.push_back(section_point_from_plane(params, x, z));
            orbit.period = 0.0;
            Matrix2 mono{{{1.0, 0.0}, {0.0, 1.0}}};
            for (int k = 0; k < n_return; ++k) {
                orbit.period += chain.returns[k].return_time;
                mono = mul2(chain.jacobians[k], mono);
                if (k + 1 < n_return) {
                    SectionPoint q = chain.returns[k].point;
                    q.t = 0.0;
                    orbit.section_points.push_back(q);
                }
            }
            orbit.monodromy = mono;
            orbit.multipliers = eigenvalues2(mono);
            return orbit;
        }

        // Newton step on g^n(p) - p
        Matrix2 J{{{1.0, 0.0}, {0.0, 1.0}}};
        for (int k = 0; k < n_return; ++k) J = mul2(chain.jacobians[k], J);
        double a = J[0][0] - 1.0, b = J[0][1];
        double c = J[1][0], d = J[1][1] - 1.0;
        double det = a * d - b * c;
        if (det == 0.0 || !std::isfinite(det))
            throw orbit_search_error("find_periodic_orbit: singular Newton system", best_res,
                                     best_point);
        double rx = chain.returns.back().point.x - x;
        double rz = chain.returns.back().point.z - z;
        double sx = -(d * rx - b * rz) / det;
        double sz = -(-c * rx + a * rz) / det;

        double lambda = 1.0;
        bool advanced = false;
        for (int half = 0; half < 8; ++half) {
            double nx = x + lambda * sx, nz = z + lambda * sz;
            try {
                ChainResult probe = evaluate_chain(params, nx, nz, spec, n_return, cfg, false);
                if (probe.residual < chain.residual) {
                    x = nx;
                    z = nz;
                    advanced = true;
                    break;
                }
            } catch (const std::exception&) {
                // damped step left the section's good region; halve and retry
            }
            lambda *= 0.5;
        }
        if (!advanced) {
            // accept the full step once; stalling otherwise ends the search
            double nx = x + sx, nz = z + sz;
            try {
                evaluate_chain(params, nx, nz, spec, n_return, cfg, false);
                x = nx;
                z = nz;
            } catch (const std::exception&) {
                throw orbit_search_error("find_periodic_orbit: Newton step left the domain",
                                         best_res, best_point);
            }
        }
    }
    throw orbit_search_error("find_periodic_orbit: no convergence in 50 iterations", best_res,
                             best_point);
}

std::vector<RecurrenceCandidate> recurrence_scan(const SystemParams& params,
                                                 const Trajectory& traj, const SectionSpec& spec,
                                                 double radius, int max_shift) {
    auto crossings = detect_crossings(traj, spec);
    std::vector<SectionPoint> ups;
    for (const auto& c : crossings)
        if (c.kind == CrossingKind::Up && spec.admits(c.state)) ups.push_back(c);

    std::vector<RecurrenceCandidate> out;
    (void)params;
    for (int n = 1; n <= max_shift; ++n) {
        if (ups.size() <= static_cast<std::size_t>(n)) break;
        for (std::size_t i = 0; i + n < ups.size(); ++i) {
            double d = std::hypot(ups[i + n].x - ups[i].x, ups[i + n].z - ups[i].z);
            if (d < radius) out.push_back({ups[i], n, d});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const RecurrenceCandidate& a, const RecurrenceCandidate& b) {
                  return a.distance < b.distance;
              });
    return out;
}

namespace {

ManifoldBranch trace_branch(const SystemParams& params, ManifoldBranchId which,
                            const State& seed, double epsilon, const IntegratorConfig& cfg,
                            double reached_norm_target) {
    IntegratorConfig bcfg = cfg;
    bcfg.escape_radius = reached_norm_target;
    auto traj = std::make_shared<Trajectory>(
        integrate_negated(params, seed, {0.0, bcfg.t_max}, bcfg));

    ManifoldBranch branch;
    branch.which = which;
    branch.seed_offset = epsilon;
    branch.seed = seed;
    for (std::size_t i = 0; i < traj->size(); ++i) {
        branch.times.push_back(traj->time_at(i));
        branch.polyline.push_back(traj->state_at(i));
    }
    branch.reached_norm = norm(branch.polyline.back());
    branch.flight = traj;

    double sign = (which == ManifoldBranchId::Delta1) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < branch.polyline.size(); ++i) {
        const State& s = branch.polyline[i];
        double xq = sign * s.x, yq = sign * s.y;
        if (xq < -kQuadrantTol || yq > kQuadrantTol)
            branch.violations.push_back({branch.times[i], s});
    }
    return branch;
}

}  // namespace

std::pair<ManifoldBranch, ManifoldBranch> trace_stable_manifold(const SystemParams& params,
                                                                double epsilon,
                                                                const IntegratorConfig& cfg,
                                                                double reached_norm_target) {
    if (params.kind != SystemKind::MooreSpiegel || !(params.T > 0.0) || !(params.R > 0.0))
        throw std::domain_error("trace_stable_manifold: requires Moore-Spiegel with T, R > 0");
    if (!(epsilon >= 1e-8 && epsilon <= 1e-4))
        throw std::domain_error("trace_stable_manifold: epsilon must lie in [1e-8, 1e-4]");

    // The origin Jacobian always has one real negative eigenvalue when
    // T, R > 0: the determinant -T is negative while a complex pair
    // contributes a positive factor to the product.
    Matrix3 jac = eval_jacobian(params, State{0.0, 0.0, 0.0});
    Eigen::Matrix3d J;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) J(i, j) = jac[i][j];
    Eigen::EigenSolver<Eigen::Matrix3d> solver(J);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("trace_stable_manifold: eigenvalue solver failed");

    double lambda_s = 0.0;
    bool found = false;
    for (int i = 0; i < 3; ++i) {
        auto ev = solver.eigenvalues()(i);
        if (std::abs(ev.imag()) < 1e-9 * std::max(1.0, std::abs(ev.real())) && ev.real() < 0.0) {
            if (!found || ev.real() < lambda_s) lambda_s = ev.real();
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error("trace_stable_manifold: no real negative eigenvalue found");

    // Companion-matrix eigenvector (1, lambda, lambda^2); with lambda < 0
    // the + orientation points into {x > 0, y < 0}, which is Delta1's side.
    State v{1.0, lambda_s, lambda_s * lambda_s};
    v = (1.0 / norm(v)) * v;

    ManifoldBranch d1 = trace_branch(params, ManifoldBranchId::Delta1, epsilon * v, epsilon, cfg,
                                     reached_norm_target);
    ManifoldBranch d2 = trace_branch(params, ManifoldBranchId::Delta2, (-epsilon) * v, epsilon,
                                     cfg, reached_norm_target);
    return {std::move(d1), std::move(d2)};
}

std::string to_string(ExitSurface surface) {
    switch (surface) {
        case ExitSurface::H1: return "H1";
        case ExitSurface::U: return "U";
        case ExitSurface::H2: return "H2";
        case ExitSurface::SmallU: return "u";
        case ExitSurface::None: return "none";
    }
    return "unknown";
}

std::string to_string(SweepArc arc) { return arc == SweepArc::L1 ? "l1" : "l2"; }

SweepCurve exit_time_sweep(const SystemParams& params, SweepArc arc,
                           const std::vector<double>& s_values, const IntegratorConfig& cfg) {
    if (params.kind != SystemKind::MooreSpiegel || !(params.T > 0.0))
        throw std::domain_error("exit_time_sweep: requires Moore-Spiegel with T > 0");

    SweepCurve curve;
    curve.params = params;
    curve.arc = arc;
    const double sign = (arc == SweepArc::L1) ? 1.0 : -1.0;

    for (double s : s_values) {
        if (!(sign * s > 0.0))
            throw std::domain_error("exit_time_sweep: s must lie on the declared arc");

        SweepRecord rec;
        rec.s = s;
        Trajectory traj = integrate(params, State{s, 0.0, 0.0}, {0.0, cfg.t_max}, cfg);

        // exit through the wall {x = 0}: x falling for l1, rising for l2
        auto x_events = locate_event(
            traj, [](const State& st) { return st.x; },
            arc == SweepArc::L1 ? EventDirection::Falling : EventDirection::Rising);
        // exit through the section half-plane: y returning to 0
        auto y_events = locate_event(
            traj, [](const State& st) { return st.y; },
            arc == SweepArc::L1 ? EventDirection::Rising : EventDirection::Falling);

        std::optional<double> t_exit;
        ExitSurface surface = ExitSurface::None;
        State exit_state{};
        if (!x_events.empty()) {
            t_exit = x_events.front().t;
            exit_state = x_events.front().state;
            surface = (arc == SweepArc::L1) ? ExitSurface::H1 : ExitSurface::H2;
        }
        if (!y_events.empty() && (!t_exit || y_events.front().t < *t_exit)) {
            t_exit = y_events.front().t;
            exit_state = y_events.front().state;
            surface = (arc == SweepArc::L1) ? ExitSurface::U : ExitSurface::SmallU;
        }

        if (t_exit) {
            rec.t_exit = *t_exit;
            rec.exit_state = exit_state;
            rec.exit_surface = surface;
        }

        // containment in the closed quadrant until the exit (or the whole
        // horizon when no exit was found)
        double t_check = t_exit ? *t_exit : traj.t_end();
        const auto& raw = traj.raw();
        for (std::size_t seg = 0; seg < raw.segments.size() && rec.containment_ok; ++seg) {
            for (int j = 0; j <= 4; ++j) {
                double t = raw.segments[seg].t0 + raw.segments[seg].h * j / 4.0;
                if (t > t_check) break;
                auto v = raw.segments[seg].eval_theta(j / 4.0);
                double xq = sign * v[0], yq = sign * v[1];
                if (xq < -kQuadrantTol || yq > kQuadrantTol) {
                    rec.containment_ok = false;
                    rec.violation = ManifoldViolation{t, State{v[0], v[1], v[2]}};
                    break;
                }
            }
        }
        curve.records.push_back(rec);
    }
    return curve;
}

std::string sweep_csv(const SweepCurve& curve) {
    std::ostringstream os;
    os << "s,t_exit,exit_surface,x,y,z\n";
    char buf[200];
    for (const auto& r : curve.records) {
        if (r.t_exit) {
            std::snprintf(buf, sizeof buf, "%.16e,%.16e,%s,%.16e,%.16e,%.16e\n", r.s, *r.t_exit,
                          to_string(r.exit_surface).c_str(), r.exit_state.x, r.exit_state.y,
                          r.exit_state.z);
        } else {
            std::snprintf(buf, sizeof buf, "%.16e,,none,,,\n", r.s);
        }
        os << buf;
    }
    return os.str();
}

}  // namespace flowtopo
