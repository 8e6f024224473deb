#include <doctest.h>

#include <cmath>

#include "flowtopo/expr.hpp"
#include "flowtopo/topo.hpp"

using namespace flowtopo;

namespace {

SystemParams identity_field() {
    // s -> s as a custom field: one source at the origin
    auto def = std::make_shared<expr::FieldDef>(
        expr::parse_field_file("xdot = x\nydot = y\nzdot = z\n"));
    return SystemParams::custom_field(def);
}

}  // namespace

TEST_CASE("icosphere counts and orientation") {
    SphereMesh m4 = icosphere(4);
    CHECK(m4.triangles.size() == 5120);
    SphereMesh m0 = icosphere(0);
    CHECK(m0.triangles.size() == 20);
    CHECK(m0.vertices.size() == 12);
    // outward orientation: total signed area of the identity map is 4*pi
    double total = 0.0;
    for (const auto& tri : m4.triangles)
        total += signed_solid_angle(m4.vertices[tri[0]], m4.vertices[tri[1]],
                                    m4.vertices[tri[2]]);
    CHECK(total == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("analytic index by the sign rule") {
    CHECK(analytic_index(SystemParams::moore_spiegel(27.0, 100.0), State{0, 0, 0}) == -1);
    CHECK(analytic_index(SystemParams::moore_spiegel(-1.0, 100.0), State{0, 0, 0}) == 1);
    CHECK(analytic_index(identity_field(), State{0, 0, 0}) == 1);
    // index of the origin across a T sweep: -sign(T)
    for (double t : {1.0, 27.0, 100.0})
        CHECK(analytic_index(SystemParams::moore_spiegel(t, 100.0), State{0, 0, 0}) == -1);
    for (double t : {-1.0, -27.0, -100.0})
        CHECK(analytic_index(SystemParams::moore_spiegel(t, 100.0), State{0, 0, 0}) == 1);

    CHECK_THROWS_AS(analytic_index(SystemParams::moore_spiegel(27.0, 100.0), State{1, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic_index(SystemParams::moore_spiegel(0.0, 100.0), State{0, 0, 0}),
                    degenerate_fixed_point_error);
}

TEST_CASE("numerical degree: identity field, Moore-Spiegel, Nose-Hoover") {
    auto id = numerical_degree(identity_field(), State{0, 0, 0}, 1.0, 4);
    CHECK(id.numerical_degree == 1);
    CHECK(std::abs(id.raw_degree - 1.0) < 1e-9);
    CHECK(id.analytic.has_value());
    CHECK(*id.analytic == 1);
    CHECK(id.agreement);

    auto ms_local =
        numerical_degree(SystemParams::moore_spiegel(27.0, 100.0), State{0, 0, 0}, 1e-2, 4);
    CHECK(ms_local.numerical_degree == -1);
    CHECK(ms_local.agreement);

    auto ms_large =
        numerical_degree(SystemParams::moore_spiegel(27.0, 100.0), State{0, 0, 0}, 50.0, 4);
    CHECK(ms_large.numerical_degree == -1);

    auto nh = numerical_degree(SystemParams::nose_hoover(1.0), State{0, 0, 0}, 50.0, 4);
    CHECK(nh.numerical_degree == 0);
    CHECK_FALSE(nh.analytic.has_value());

    // one extra subdivision level: same integer, raw values within 0.05
    auto nh5 = numerical_degree(SystemParams::nose_hoover(1.0), State{0, 0, 0}, 50.0, 5);
    CHECK(nh5.numerical_degree == nh.numerical_degree);
    CHECK(std::abs(nh5.raw_degree - nh.raw_degree) < 0.05);

    CHECK_THROWS_AS(numerical_degree(SystemParams::nose_hoover(1.0), State{0, 0, 0}, 50.0, 3),
                    std::domain_error);
    // sphere through the zero of the Moore-Spiegel field
    CHECK_THROWS_AS(numerical_degree(SystemParams::moore_spiegel(27.0, 100.0),
                                     State{1e-13, 0, 0}, 1e-13, 4),
                    ill_posed_degree_error);
}

TEST_CASE("degree additivity: large sphere equals the sum of enclosed indices") {
    // Nose-Hoover encloses nothing; Moore-Spiegel encloses the origin
    auto nh = numerical_degree(SystemParams::nose_hoover(0.1), State{0, 0, 0}, 50.0, 4);
    CHECK(nh.numerical_degree == 0);
    auto ms = numerical_degree(SystemParams::moore_spiegel(39.25, 100.0), State{0, 0, 0}, 50.0, 4);
    CHECK(ms.numerical_degree ==
          analytic_index(SystemParams::moore_spiegel(39.25, 100.0), State{0, 0, 0}));
}

TEST_CASE("direction avoidance") {
    // the Nose-Hoover direction field misses (0,0,1) on large spheres
    double angle =
        direction_avoidance(SystemParams::nose_hoover(1.0), 50.0, State{0, 0, 1}, 20000);
    CHECK(angle > 0.0);
    // on the poles the field points straight down
    State pole_field = eval_field(SystemParams::nose_hoover(1.0), State{0, 0, 50.0});
    CHECK(pole_field.x == 0.0);
    CHECK(pole_field.y == 0.0);
    CHECK(pole_field.z < 0.0);

    // the identity field attains every direction
    double id_angle = direction_avoidance(identity_field(), 1.0, State{0, 0, 1}, 20000);
    CHECK(id_angle < 0.02);

    // seeding rotates the lattice deterministically
    double a1 = direction_avoidance(SystemParams::nose_hoover(1.0), 50.0, State{0, 0, 1}, 5000, 7);
    double a2 = direction_avoidance(SystemParams::nose_hoover(1.0), 50.0, State{0, 0, 1}, 5000, 7);
    CHECK(a1 == a2);
}

TEST_CASE("Moore-Spiegel spectrum: exact triple, no sink, transversal plane") {
    SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
    SpectrumClass spec = classify_spectrum(params, State{0, 0, 0});
    CHECK(spec.rh_a == 1.0);
    CHECK(spec.rh_ab_minus_c == -100.0);
    CHECK(spec.rh_c == 27.0);
    CHECK(spec.kind != SpectrumKind::Sink);
    CHECK(spec.max_real_part() > 0.0);
    CHECK(spec.kind == SpectrumKind::RealSaddle);
    CHECK(spec.unstable_plane_section_angle ==
          doctest::Approx(0.3594767190471782).epsilon(1e-9));

    // rh triple stays exact and the origin is never a sink on a grid
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            double t = 1.0 + 99.0 * i / 9.0;
            double rr = 1.0 + 99.0 * j / 9.0;
            SpectrumClass sc =
                classify_spectrum(SystemParams::moore_spiegel(t, rr), State{0, 0, 0});
            CHECK(sc.rh_a == 1.0);
            CHECK(sc.rh_ab_minus_c == -rr);
            CHECK(sc.rh_c == t);
            CHECK(sc.max_real_part() > 0.0);
            CHECK(sc.kind != SpectrumKind::Sink);
        }

    CHECK_THROWS_AS(classify_spectrum(SystemParams::nose_hoover(1.0), State{0, 0, 0}),
                    std::domain_error);
    CHECK_THROWS_AS(classify_spectrum(params, State{1, 0, 0}), std::invalid_argument);
}
