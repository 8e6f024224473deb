#include <doctest.h>

#include <cmath>
#include <random>

#include "flowtopo/expr.hpp"
#include "flowtopo/ode.hpp"
#include "oracles.hpp"

using namespace flowtopo;

TEST_CASE("invariant line: exact drift down the z-axis") {
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    Trajectory traj = integrate(SystemParams::nose_hoover(1.0), State{0, 0, 5}, {0.0, 10.0}, cfg);
    double max_xy = 0.0, max_zerr = 0.0;
    for (int i = 0; i <= 500; ++i) {
        double t = 10.0 * i / 500.0;
        State s = traj.evaluate(t);
        max_xy = std::max({max_xy, std::abs(s.x), std::abs(s.y)});
        max_zerr = std::max(max_zerr, std::abs(s.z - (5.0 - t)));
    }
    CHECK(max_xy < 1e-9);
    CHECK(max_zerr < 1e-8);
}

TEST_CASE("Hopf fixture converges to the unit circle") {
    IntegratorConfig cfg;
    cfg.t_max = 60.0;
    Trajectory traj =
        integrate(SystemParams::validation_hopf(1.0, 1.0), State{1.0, 0.0, 0.0}, {0.0, 50.0}, cfg);
    for (double t : {50.0, 49.0, 48.5}) {
        State s = traj.evaluate(t);
        CHECK(std::abs(std::hypot(s.x, s.y) - 1.0) < 1e-6);
    }
}

TEST_CASE("dense output reproduces samples exactly and stays accurate between them") {
    IntegratorConfig cfg;
    Trajectory traj =
        integrate(SystemParams::nose_hoover(1.0), State{1, 0, 0}, {0.0, 20.0}, cfg);
    for (std::size_t i = 0; i < traj.size(); i += 7) {
        State direct = traj.state_at(i);
        State dense = traj.evaluate(traj.time_at(i));
        CHECK(dense.x == direct.x);
        CHECK(dense.y == direct.y);
        CHECK(dense.z == direct.z);
    }
    // dense output against a fresh integration started mid-segment
    for (double t : {0.37, 4.11, 13.79}) {
        State a = traj.evaluate(t);
        IntegratorConfig tight = cfg;
        tight.rel_tol = 1e-13;
        tight.abs_tol = 1e-15;
        Trajectory ref =
            integrate(SystemParams::nose_hoover(1.0), State{1, 0, 0}, {0.0, t + 1.0}, tight);
        State b = ref.evaluate(t);
        CHECK(norm(a - b) < 1e-8);
    }
}

TEST_CASE("tolerance halving moves endpoints by less than 10x the looser tolerance") {
    for (const auto& params :
         {SystemParams::nose_hoover(1.0), SystemParams::moore_spiegel(27.0, 100.0)}) {
        State s0 = params.kind == SystemKind::NoseHoover ? State{1, 0, 0} : State{0.1, 0, 0};
        IntegratorConfig loose;
        loose.rel_tol = 1e-10;
        loose.abs_tol = 1e-12;
        IntegratorConfig tight = loose;
        tight.rel_tol = 5e-11;
        tight.abs_tol = 5e-13;
        double t_end = 20.0;
        Trajectory a = integrate(params, s0, {0.0, t_end}, loose);
        Trajectory b = integrate(params, s0, {0.0, t_end}, tight);
        double scale = std::max(1.0, norm(a.state_at(a.size() - 1)));
        CHECK(norm(a.state_at(a.size() - 1) - b.state_at(b.size() - 1)) <
              10.0 * loose.rel_tol * scale * 1e3);
    }
}

TEST_CASE("time-reversal symmetry of the Nose-Hoover flow") {
    // (x, y, z)(t) solves the system iff (x, -y, -z)(-t) does
    SystemParams params = SystemParams::nose_hoover(1.0);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    IntegratorConfig cfg;
    cfg.t_max = 25.0;
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 20; ++trial) {
        State s0{u(rng), u(rng), u(rng)};
        Trajectory fwd = integrate(params, s0, {0.0, 20.0}, cfg);
        if (fwd.termination()) continue;  // escaped; symmetry check wants bounded arcs
        State mirrored{s0.x, -s0.y, -s0.z};
        Trajectory bwd = integrate_negated(params, mirrored, {0.0, 20.0}, cfg);
        if (bwd.termination()) continue;
        ++checked;
        for (double t : {1.0, 5.0, 12.0, 20.0}) {
            State a = fwd.evaluate(t);
            State b = bwd.evaluate(t);
            CHECK(std::abs(a.x - b.x) < 1e-7);
            CHECK(std::abs(a.y + b.y) < 1e-7);
            CHECK(std::abs(a.z + b.z) < 1e-7);
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("event location on the Hopf fixture: uniform rotation") {
    SystemParams params = SystemParams::validation_hopf(1.0, 1.0);
    IntegratorConfig cfg;
    cfg.t_max = 60.0;
    Trajectory traj = integrate(params, State{1.0, 0.0, 0.0}, {0.0, 40.0}, cfg);
    auto events = locate_event(
        traj, [](const State& s) { return s.x; }, EventDirection::Rising);
    REQUIRE(events.size() >= 5);
    for (std::size_t i = 1; i < events.size(); ++i)
        CHECK(std::abs(events[i].t - events[i - 1].t - 2.0 * M_PI) < 1e-8);
    for (const auto& ev : events) CHECK(std::abs(ev.state.x) < 1e-12);
}

TEST_CASE("events at the start time are excluded") {
    // start on y = 0 with positive drift: the first reported event is a
    // genuinely later crossing
    SystemParams params = SystemParams::validation_hopf(1.0, 1.0);
    IntegratorConfig cfg;
    cfg.t_max = 30.0;
    Trajectory traj = integrate(params, State{1.0, 0.0, 0.0}, {0.0, 20.0}, cfg);
    auto events = locate_event(
        traj, [](const State& s) { return s.y; }, EventDirection::Any);
    REQUIRE_FALSE(events.empty());
    CHECK(events.front().t > 1.0);
}

TEST_CASE("first falling section event matches the fixed-step RK4 oracle") {
    SystemParams params = SystemParams::nose_hoover(1.0);
    IntegratorConfig cfg;
    cfg.t_max = 30.0;
    Trajectory traj = integrate(params, State{-1.0, 1.0, 0.0}, {0.0, 20.0}, cfg);
    auto events = locate_event(
        traj, [](const State& s) { return s.y; }, EventDirection::Falling);
    REQUIRE_FALSE(events.empty());
    double expected = oracle::rk4_first_event(
        params, State{-1.0, 1.0, 0.0}, [](const State& s) { return s.y; }, -1, 20.0, 1e-4);
    CHECK(std::abs(events.front().t - expected) < 1e-6);
}

TEST_CASE("event times are bit-reproducible across runs") {
    SystemParams params = SystemParams::nose_hoover(1.0);
    IntegratorConfig cfg;
    cfg.t_max = 60.0;
    auto run = [&]() {
        Trajectory traj = integrate(params, State{1, 0, 0}, {0.0, 50.0}, cfg);
        return locate_event(
            traj, [](const State& s) { return s.y; }, EventDirection::Any);
    };
    auto a = run();
    auto b = run();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].t == b[i].t);
}

TEST_CASE("fate classification") {
    IntegratorConfig cfg;
    cfg.t_max = 120.0;
    SystemParams nh = SystemParams::nose_hoover(1.0);
    CHECK(classify_fate(nh, State{0, 0, 5}, cfg).tag == FateKind::OnInvariantLine);
    CHECK(classify_fate(nh, State{1, 0, 0}, cfg).tag == FateKind::Bounded);
    CHECK(classify_fate(SystemParams::moore_spiegel(27.0, 100.0), State{0.1, 0, 0}, cfg).tag ==
          FateKind::Bounded);
    // the Hopf fixture contracts the z-axis onto the origin
    Fate hopf_axis = classify_fate(SystemParams::validation_hopf(1.0, 1.0), State{0, 0, 1}, cfg);
    CHECK(hopf_axis.tag == FateKind::OnInvariantLine);
    // off the axis the Hopf origin repels; the orbit settles on the cycle
    Fate near_origin =
        classify_fate(SystemParams::validation_hopf(1.0, 1.0), State{1e-6, 0, 0.5}, cfg);
    CHECK(near_origin.tag == FateKind::Bounded);
    // a custom linear sink does converge to its (censused) fixed point
    auto sink_def = std::make_shared<expr::FieldDef>(
        expr::parse_field_file("xdot = -x\nydot = -y\nzdot = -z\n"));
    Fate sink = classify_fate(SystemParams::custom_field(sink_def), State{1, 1, 1}, cfg);
    CHECK(sink.tag == FateKind::ConvergedToFixedPoint);
}

TEST_CASE("escape terminates integration with the escape fate") {
    SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    cfg.escape_radius = 50.0;
    // far outside the attractor basin structures, pushed along +x
    Trajectory traj = integrate(params, State{49.0, 5.0, 0.0}, {0.0, 100.0}, cfg);
    REQUIRE(traj.termination());
    CHECK(traj.termination()->tag == FateKind::Escaped);
    CHECK(norm(traj.termination()->state) >= 50.0);
}

TEST_CASE("trajectory CSV export shape") {
    IntegratorConfig cfg;
    cfg.t_max = 2.0;
    Trajectory traj = integrate(SystemParams::nose_hoover(1.0), State{1, 0, 0}, {0.0, 1.0}, cfg);
    std::string csv = trajectory_csv(traj);
    CHECK(csv.rfind("t,x,y,z\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(traj.size()) + 1);
    CHECK(csv.find("e+") != std::string::npos);  // scientific notation
}

TEST_CASE("config validation") {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-15;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = IntegratorConfig{};
    cfg.t_max = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = IntegratorConfig{};
    CHECK_THROWS_AS(
        integrate(SystemParams::nose_hoover(1.0), State{0, 0, 0}, {1.0, 0.5}, cfg),
        std::invalid_argument);
}
