#include <doctest.h>

#include "flowtopo/expr.hpp"

using namespace flowtopo;
using namespace flowtopo::expr;

TEST_CASE("expression evaluation with precedence and unary minus") {
    EvalContext ctx{2.0, 3.0, -1.0, nullptr};
    CHECK(parse_expression("1 + 2*3")->eval(ctx) == doctest::Approx(7.0));
    CHECK(parse_expression("(1 + 2)*3")->eval(ctx) == doctest::Approx(9.0));
    CHECK(parse_expression("-x^2")->eval(ctx) == doctest::Approx(-4.0));
    CHECK(parse_expression("2^3")->eval(ctx) == doctest::Approx(8.0));
    CHECK(parse_expression("x*y - z/2")->eval(ctx) == doctest::Approx(6.5));
    CHECK(parse_expression("1.5e2 + 1e-2")->eval(ctx) == doctest::Approx(150.01));
    CHECK(parse_expression("--x")->eval(ctx) == doctest::Approx(2.0));
}

TEST_CASE("parse errors carry line and column") {
    CHECK_THROWS_AS(parse_expression("1 + "), parse_error);
    CHECK_THROWS_AS(parse_expression("x^y"), parse_error);
    CHECK_THROWS_AS(parse_expression("x^-2"), parse_error);
    CHECK_THROWS_AS(parse_expression("x^2.5"), parse_error);
    CHECK_THROWS_AS(parse_expression("(x + y"), parse_error);
    CHECK_THROWS_AS(parse_expression("x $ y"), parse_error);
    try {
        parse_expression("x + @");
        FAIL("expected parse_error");
    } catch (const parse_error& err) {
        CHECK(err.line() == 1);
        CHECK(err.column() == 5);
    }
}

TEST_CASE("symbolic differentiation of polynomial expressions") {
    auto e = parse_expression("x^3 - 2*x*y + 4");
    auto dx = e->derivative("x");
    auto dy = e->derivative("y");
    EvalContext ctx{2.0, 5.0, 0.0, nullptr};
    CHECK(dx->eval(ctx) == doctest::Approx(3.0 * 4.0 - 2.0 * 5.0));
    CHECK(dy->eval(ctx) == doctest::Approx(-4.0));
    // quotient rule
    auto q = parse_expression("x/(1 + y)");
    CHECK(q->derivative("y")->eval(ctx) == doctest::Approx(-2.0 / 36.0));
}

TEST_CASE("field file defines components and parameters") {
    std::string text =
        "# Moore-Spiegel written as a custom field\n"
        "T = 27\n"
        "R = 100\n"
        "xdot = y\n"
        "ydot = z\n"
        "zdot = -z - (T - R + R*x^2)*y - T*x\n";
    FieldDef def = parse_field_file(text);
    CHECK(def.params().at("T") == doctest::Approx(27.0));
    State f = def.eval(State{1.0, 2.0, 3.0});
    CHECK(f.x == doctest::Approx(2.0));
    CHECK(f.y == doctest::Approx(3.0));
    CHECK(f.z == doctest::Approx(-3.0 - (27.0 - 100.0 + 100.0) * 2.0 - 27.0));

    auto jac = def.jacobian(State{1.0, 2.0, 3.0});
    CHECK(jac[0][1] == doctest::Approx(1.0));
    CHECK(jac[2][0] == doctest::Approx(-27.0 - 2.0 * 100.0 * 1.0 * 2.0));
    CHECK(jac[2][2] == doctest::Approx(-1.0));
}

TEST_CASE("field file errors") {
    CHECK_THROWS_AS(parse_field_file("xdot = y\nydot = z\n"), parse_error);          // missing zdot
    CHECK_THROWS_AS(parse_field_file("xdot = y\nxdot = z\nydot = 0\nzdot = 0\n"),
                    parse_error);                                                    // duplicate
    CHECK_THROWS_AS(parse_field_file("a = x + 1\nxdot = 0\nydot = 0\nzdot = 0\n"),
                    parse_error);  // parameter must be constant
    try {
        parse_field_file("xdot = y\nydot = z *\nzdot = 0\n");
        FAIL("expected parse_error");
    } catch (const parse_error& err) {
        CHECK(err.line() == 2);
    }
}
