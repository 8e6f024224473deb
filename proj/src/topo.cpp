#include "flowtopo/topo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace flowtopo {

int analytic_index(const SystemParams& params, const State& fp) {
    if (norm(eval_field(params, fp)) >= 1e-10)
        throw std::invalid_argument("analytic_index: point is not a fixed point");
    double det = det3(eval_jacobian(params, fp));
    if (std::abs(det) <= 1e-10)
        throw degenerate_fixed_point_error(
            "analytic_index: degenerate Jacobian, index undefined by the sign rule");
    return det > 0.0 ? 1 : -1;
}

double signed_solid_angle(const State& a, const State& b, const State& c) {
    double num = dot(a, cross(b, c));
    double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::atan2(num, den);
}

SphereMesh icosphere(int subdivision) {
    SphereMesh mesh;
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    auto push = [&](double x, double y, double z) {
        State v{x, y, z};
        mesh.vertices.push_back((1.0 / norm(v)) * v);
    };
    push(-1, phi, 0); push(1, phi, 0); push(-1, -phi, 0); push(1, -phi, 0);
    push(0, -1, phi); push(0, 1, phi); push(0, -1, -phi); push(0, 1, -phi);
    push(phi, 0, -1); push(phi, 0, 1); push(-phi, 0, -1); push(-phi, 0, 1);

    mesh.triangles = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10},  {0, 10, 11},
                      {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6},  {7, 1, 8},
                      {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},   {3, 8, 9},
                      {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},   {9, 8, 1}};

    for (int level = 0; level < subdivision; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::minmax(i, j);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            State v = mesh.vertices[i] + mesh.vertices[j];
            mesh.vertices.push_back((1.0 / norm(v)) * v);
            int idx = static_cast<int>(mesh.vertices.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& tri : mesh.triangles) {
            int a = tri[0], b = tri[1], c = tri[2];
            int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }
    return mesh;
}

IndexResult numerical_degree(const SystemParams& params, const State& center, double radius,
                             int subdivision) {
    if (!(radius > 0.0)) throw std::domain_error("numerical_degree: radius must be positive");
    if (subdivision < 4)
        throw std::domain_error("numerical_degree: subdivision must be at least 4");

    SphereMesh mesh = icosphere(subdivision);

    std::vector<State> image(mesh.vertices.size());
    double min_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        State f = eval_field(params, center + radius * mesh.vertices[i]);
        double fn = norm(f);
        min_norm = std::min(min_norm, fn);
        if (fn <= 1e-8)
            throw ill_posed_degree_error(
                "numerical_degree: field vanishes on the sphere (degree ill-posed)");
        image[i] = (1.0 / fn) * f;
    }

    // fixed summation order for bit reproducibility
    double total = 0.0;
    for (const auto& tri : mesh.triangles)
        total += signed_solid_angle(image[tri[0]], image[tri[1]], image[tri[2]]);

    IndexResult out;
    out.point = center;
    out.radius = radius;
    out.subdivision = subdivision;
    out.raw_degree = total / (4.0 * M_PI);
    double rounded = std::round(out.raw_degree);
    if (std::abs(out.raw_degree - rounded) >= 0.1)
        throw degree_resolution_error(
            "numerical_degree: raw value too far from an integer; raise the subdivision");
    out.numerical_degree = static_cast<int>(rounded);

    if (norm(eval_field(params, center)) < 1e-10) {
        double det = det3(eval_jacobian(params, center));
        if (std::abs(det) > 1e-10) out.analytic = det > 0.0 ? 1 : -1;
    }
    out.agreement = !out.analytic || *out.analytic == out.numerical_degree;
    return out;
}

namespace {

// Deterministic rotation from a seed via three Euler-like angles drawn from
// splitmix64; seed 0 is the identity.
Matrix3 seeded_rotation(unsigned seed) {
    if (seed == 0) return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    auto next = [state = static_cast<uint64_t>(seed)]() mutable {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    };
    double a = 2.0 * M_PI * next(), b = 2.0 * M_PI * next(), c = 2.0 * M_PI * next();
    double ca = std::cos(a), sa = std::sin(a);
    double cb = std::cos(b), sb = std::sin(b);
    double cc = std::cos(c), sc = std::sin(c);
    Matrix3 rz{{{ca, -sa, 0}, {sa, ca, 0}, {0, 0, 1}}};
    Matrix3 ry{{{cb, 0, sb}, {0, 1, 0}, {-sb, 0, cb}}};
    Matrix3 rx{{{1, 0, 0}, {0, cc, -sc}, {0, sc, cc}}};
    auto mul = [](const Matrix3& p, const Matrix3& q) {
        Matrix3 r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r[i][j] += p[i][k] * q[k][j];
        return r;
    };
    return mul(rz, mul(ry, rx));
}

State apply3(const Matrix3& m, const State& v) {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

}  // namespace

double direction_avoidance(const SystemParams& params, double radius, const State& direction,
                           int samples, unsigned seed) {
    if (!(radius > 0.0)) throw std::domain_error("direction_avoidance: radius must be positive");
    if (samples < 1) throw std::domain_error("direction_avoidance: need at least one sample");
    double dn = norm(direction);
    if (!(dn > 0.0)) throw std::domain_error("direction_avoidance: zero direction");
    State dir = (1.0 / dn) * direction;

    Matrix3 rot = seeded_rotation(seed);
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    double min_angle = M_PI;
    for (int i = 0; i < samples; ++i) {
        double zc = 1.0 - 2.0 * (i + 0.5) / samples;
        double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double ang = golden_angle * i;
        State u = apply3(rot, State{rho * std::cos(ang), rho * std::sin(ang), zc});
        State f = eval_field(params, radius * u);
        double fn = norm(f);
        if (fn <= 1e-12)
            throw ill_posed_degree_error("direction_avoidance: field vanishes on the sphere");
        double c = dot(f, dir) / fn;
        min_angle = std::min(min_angle, std::acos(std::clamp(c, -1.0, 1.0)));
    }
    return min_angle;
}

SpectrumClass classify_spectrum(const SystemParams& params, const State& fp) {
    if (params.kind != SystemKind::MooreSpiegel)
        throw std::domain_error("classify_spectrum: defined for the Moore-Spiegel system");
    if (norm(eval_field(params, fp)) >= 1e-10)
        throw std::invalid_argument("classify_spectrum: point is not a fixed point");

    SpectrumClass out = classify_matrix(eval_jacobian(params, fp));
    // Routh-Hurwitz triple of lambda^3 + lambda^2 + (T - R) lambda + T,
    // exact by the structure of the linearization.
    out.rh_a = 1.0;
    out.rh_ab_minus_c = -params.R;
    out.rh_c = params.T;
    return out;
}

}  // namespace flowtopo
