#include "flowtopo/fields.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flowtopo {

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::NoseHoover: return "nose-hoover";
        case SystemKind::MooreSpiegel: return "moore-spiegel";
        case SystemKind::ValidationHopf: return "hopf";
        case SystemKind::Custom: return "custom";
    }
    return "unknown";
}

SystemKind system_kind_from_string(const std::string& name) {
    if (name == "nose-hoover" || name == "nh") return SystemKind::NoseHoover;
    if (name == "moore-spiegel" || name == "ms") return SystemKind::MooreSpiegel;
    if (name == "hopf") return SystemKind::ValidationHopf;
    if (name == "custom") return SystemKind::Custom;
    throw std::invalid_argument("unknown system: " + name);
}

SystemParams SystemParams::nose_hoover(double Q) {
    SystemParams p;
    p.kind = SystemKind::NoseHoover;
    p.Q = Q;
    p.validate();
    return p;
}

SystemParams SystemParams::moore_spiegel(double T, double R) {
    SystemParams p;
    p.kind = SystemKind::MooreSpiegel;
    p.T = T;
    p.R = R;
    p.validate();
    return p;
}

SystemParams SystemParams::validation_hopf(double mu, double omega) {
    SystemParams p;
    p.kind = SystemKind::ValidationHopf;
    p.mu = mu;
    p.omega = omega;
    p.validate();
    return p;
}

SystemParams SystemParams::custom_field(std::shared_ptr<const expr::FieldDef> def) {
    SystemParams p;
    p.kind = SystemKind::Custom;
    p.custom = std::move(def);
    p.validate();
    return p;
}

void SystemParams::validate() const {
    switch (kind) {
        case SystemKind::NoseHoover:
            if (!(std::isfinite(Q) && Q > 0.0))
                throw std::domain_error("Nose-Hoover requires Q > 0");
            break;
        case SystemKind::MooreSpiegel:
            if (!std::isfinite(T) || !std::isfinite(R))
                throw std::domain_error("Moore-Spiegel parameters must be finite");
            break;
        case SystemKind::ValidationHopf:
            if (!(std::isfinite(mu) && mu > 0.0 && std::isfinite(omega) && omega > 0.0))
                throw std::domain_error("Hopf fixture requires mu > 0 and omega > 0");
            break;
        case SystemKind::Custom:
            if (!custom) throw std::domain_error("custom system without a field definition");
            break;
    }
}

std::string SystemParams::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
        case SystemKind::NoseHoover: os << "(Q=" << Q << ")"; break;
        case SystemKind::MooreSpiegel: os << "(T=" << T << ", R=" << R << ")"; break;
        case SystemKind::ValidationHopf: os << "(mu=" << mu << ", omega=" << omega << ")"; break;
        case SystemKind::Custom: break;
    }
    return os.str();
}

double det3(const Matrix3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double trace3(const Matrix3& m) { return m[0][0] + m[1][1] + m[2][2]; }

State eval_field(const SystemParams& params, const State& s) {
    if (!s.finite()) throw std::domain_error("eval_field: non-finite state");
    switch (params.kind) {
        case SystemKind::NoseHoover:
            return {s.y, -s.x - s.z * s.y, (s.y * s.y - 1.0) / params.Q};
        case SystemKind::MooreSpiegel:
            return {s.y, s.z,
                    -s.z - (params.T - params.R + params.R * s.x * s.x) * s.y - params.T * s.x};
        case SystemKind::ValidationHopf: {
            double amp = params.mu - s.x * s.x - s.y * s.y;
            return {-params.omega * s.y + s.x * amp, params.omega * s.x + s.y * amp, -s.z};
        }
        case SystemKind::Custom:
            return params.custom->eval(s);
    }
    throw std::logic_error("eval_field: unreachable");
}

Matrix3 eval_jacobian(const SystemParams& params, const State& s) {
    if (!s.finite()) throw std::domain_error("eval_jacobian: non-finite state");
    switch (params.kind) {
        case SystemKind::NoseHoover:
            return {{{0.0, 1.0, 0.0},
                     {-1.0, -s.z, -s.y},
                     {0.0, 2.0 * s.y / params.Q, 0.0}}};
        case SystemKind::MooreSpiegel:
            return {{{0.0, 1.0, 0.0},
                     {0.0, 0.0, 1.0},
                     {-params.T - 2.0 * params.R * s.x * s.y,
                      -(params.T - params.R + params.R * s.x * s.x), -1.0}}};
        case SystemKind::ValidationHopf: {
            double amp = params.mu - s.x * s.x - s.y * s.y;
            return {{{amp - 2.0 * s.x * s.x, -params.omega - 2.0 * s.x * s.y, 0.0},
                     {params.omega - 2.0 * s.x * s.y, amp - 2.0 * s.y * s.y, 0.0},
                     {0.0, 0.0, -1.0}}};
        }
        case SystemKind::Custom:
            return params.custom->jacobian(s);
    }
    throw std::logic_error("eval_jacobian: unreachable");
}

std::string to_string(SpectrumKind kind) {
    switch (kind) {
        case SpectrumKind::RealSaddle: return "real-saddle";
        case SpectrumKind::SaddleFocus: return "saddle-focus";
        case SpectrumKind::CenterLike: return "center-like";
        case SpectrumKind::Sink: return "sink";
        case SpectrumKind::Source: return "source";
        case SpectrumKind::Degenerate: return "degenerate";
    }
    return "unknown";
}

double SpectrumClass::max_real_part() const {
    double m = eigenvalues[0].real();
    for (const auto& ev : eigenvalues) m = std::max(m, ev.real());
    return m;
}

namespace {

// Angle between the plane spanned by (u, v) and the plane y = 0, as the
// angle between their normals, folded into [0, pi/2].
double plane_angle_to_section(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    Eigen::Vector3d n = u.cross(v);
    double nn = n.norm();
    if (nn == 0.0) return 0.0;
    double c = std::min(1.0, std::abs(n.y()) / nn);
    return std::acos(c);
}

}  // namespace

SpectrumClass classify_matrix(const Matrix3& jac) {
    Eigen::Matrix3d J;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) J(i, j) = jac[i][j];

    SpectrumClass out;
    // Characteristic polynomial lambda^3 + a l^2 + b l + c of J.
    double a = -J.trace();
    double b = 0.5 * (J.trace() * J.trace() - (J * J).trace());
    double c = -J.determinant();
    out.rh_a = a;
    out.rh_ab_minus_c = a * b - c;
    out.rh_c = c;

    Eigen::EigenSolver<Eigen::Matrix3d> solver(J);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalue solver failed");
    for (int i = 0; i < 3; ++i) out.eigenvalues[i] = solver.eigenvalues()(i);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](const std::complex<double>& p, const std::complex<double>& q) {
                  if (p.real() != q.real()) return p.real() < q.real();
                  return p.imag() < q.imag();
              });

    const double tol = 1e-10;
    double scale = 0.0;
    for (const auto& ev : out.eigenvalues) scale = std::max(scale, std::abs(ev));
    double eps = tol * std::max(1.0, scale);

    int n_zero = 0, n_pos = 0, n_neg = 0, n_complex = 0, n_center = 0;
    for (const auto& ev : out.eigenvalues) {
        bool complex_ev = std::abs(ev.imag()) > eps;
        if (complex_ev) ++n_complex;
        if (std::abs(ev.real()) <= eps) {
            if (complex_ev)
                ++n_center;
            else
                ++n_zero;
        } else if (ev.real() > 0.0)
            ++n_pos;
        else
            ++n_neg;
    }

    if (n_zero > 0)
        out.kind = SpectrumKind::Degenerate;
    else if (n_center > 0)
        out.kind = SpectrumKind::CenterLike;
    else if (n_pos == 3)
        out.kind = SpectrumKind::Source;
    else if (n_neg == 3)
        out.kind = SpectrumKind::Sink;
    else
        out.kind = (n_complex > 0) ? SpectrumKind::SaddleFocus : SpectrumKind::RealSaddle;

    // Invariant plane of the two eigenvalues with the largest real parts:
    // either two real eigenvectors or the real/imaginary parts of a complex
    // eigenvector.
    Eigen::EigenSolver<Eigen::Matrix3d>::EigenvectorsType V = solver.eigenvectors();
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return solver.eigenvalues()(i).real() > solver.eigenvalues()(j).real();
    });
    int lead = order[0], second = order[1];
    Eigen::Vector3cd v1 = V.col(lead);
    Eigen::Vector3d pu, pv;
    if (std::abs(solver.eigenvalues()(lead).imag()) > eps) {
        pu = v1.real();
        pv = v1.imag();
    } else if (std::abs(solver.eigenvalues()(second).imag()) > eps) {
        Eigen::Vector3cd v2 = V.col(second);
        pu = v2.real();
        pv = v2.imag();
    } else {
        pu = v1.real();
        pv = V.col(second).real();
    }
    out.unstable_plane_section_angle = plane_angle_to_section(pu, pv);
    return out;
}

namespace {

constexpr double kDegenerateDetFloor = 1e-10;
constexpr double kZeroResidual = 1e-10;

bool newton_polish(const SystemParams& params, State& s, const Box& box) {
    for (int it = 0; it < 60; ++it) {
        if (!s.finite()) return false;
        if (!box.contains(s, 0.5 * norm(box.hi - box.lo) + 1.0)) return false;
        State f = eval_field(params, s);
        double residual = norm(f);
        if (residual < 1e-14) return true;
        Matrix3 jac = eval_jacobian(params, s);
        Eigen::Matrix3d J;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) J(i, j) = jac[i][j];
        Eigen::Vector3d rhs(-f.x, -f.y, -f.z);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(J);
        if (!lu.isInvertible()) return residual < kZeroResidual;
        Eigen::Vector3d step = lu.solve(rhs);
        if (!step.allFinite()) return false;
        s.x += step(0);
        s.y += step(1);
        s.z += step(2);
    }
    return norm(eval_field(params, s)) < kZeroResidual;
}

}  // namespace

std::vector<FixedPoint> fixed_points(const SystemParams& params, const Box& search_box) {
    params.validate();
    if (!search_box.finite()) throw std::domain_error("fixed_points: search box must be finite");

    const int n = 13;  // grid seeds per axis
    std::vector<State> zeros;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                State s{search_box.lo.x + (search_box.hi.x - search_box.lo.x) * i / (n - 1.0),
                        search_box.lo.y + (search_box.hi.y - search_box.lo.y) * j / (n - 1.0),
                        search_box.lo.z + (search_box.hi.z - search_box.lo.z) * k / (n - 1.0)};
                if (!newton_polish(params, s, search_box)) continue;
                if (!search_box.contains(s, 1e-9)) continue;
                if (norm(eval_field(params, s)) > kZeroResidual) continue;
                bool duplicate = false;
                for (const State& zs : zeros)
                    if (norm(zs - s) < 1e-6) duplicate = true;
                if (!duplicate) zeros.push_back(s);
            }

    std::sort(zeros.begin(), zeros.end(), [](const State& a, const State& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    });

    std::vector<FixedPoint> out;
    for (const State& s : zeros) {
        FixedPoint fp;
        fp.location = s;
        Matrix3 jac = eval_jacobian(params, s);
        fp.degenerate = std::abs(det3(jac)) < kDegenerateDetFloor;
        fp.spectrum = classify_matrix(jac);
        if (fp.degenerate) fp.spectrum.kind = SpectrumKind::Degenerate;
        out.push_back(fp);
    }
    return out;
}

double radial_component(const SystemParams& params, double r, const SphericalDirection& dir) {
    if (!(r > 0.0)) throw std::domain_error("radial_component: r must be positive");
    State u = dir.unit();
    State p = r * u;
    return dot(eval_field(params, p), u);
}

RadialAsymptotic radial_asymptotic_coefficient(const SystemParams& params,
                                               const SphericalDirection& dir) {
    double st = std::sin(dir.theta), ct = std::cos(dir.theta);
    double sp = std::sin(dir.psi), cp = std::cos(dir.psi);
    switch (params.kind) {
        case SystemKind::NoseHoover:
            if (params.Q == 1.0) {
                // The r^2 term carries the factor (1 - Q)/Q and vanishes
                // identically at Q = 1; the radial component is then exactly
                // -cos(theta)/Q for every r.
                return {-ct / params.Q, 0};
            }
            return {ct * st * st * sp * sp * (1.0 - params.Q) / params.Q, 2};
        case SystemKind::MooreSpiegel:
            return {-params.R * st * st * st * cp * cp * sp * ct, 3};
        default:
            throw unsupported_operation(
                "radial_asymptotic_coefficient: only nose-hoover and moore-spiegel have "
                "pinned asymptotics");
    }
}

double section_normal_component(const SystemParams& params, const State& s) {
    if (std::abs(s.y) > kSectionPlaneTol)
        throw std::invalid_argument("section_normal_component: state is not on the plane y = 0");
    return eval_field(params, s).y;
}

}  // namespace flowtopo
