#include <doctest.h>

#include <cmath>

#include "flowtopo/report_io.hpp"

using namespace flowtopo;

TEST_CASE("doubles round-trip through the 17-digit formatter") {
    for (double v : {1.0, -0.1, M_PI, std::exp(-4.0 * M_PI), 1e-300, 6.02e23,
                     0.1 + 0.2, -1234.5678901234567}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(2.0) == "2.0");
}

TEST_CASE("run config round-trips losslessly through JSON") {
    RunConfig cfg;
    cfg.system = "moore-spiegel";
    cfg.T = 27.0;
    cfg.R = 100.0;
    cfg.integrator.rel_tol = 3.7e-11;
    cfg.integrator.t_max = 123.456;
    cfg.seed = 42;
    cfg.format = "csv";
    cfg.out_dir = "/tmp/out";
    std::string text = cfg.to_json().dump();
    RunConfig back = RunConfig::from_json_text(text);
    CHECK(back.system == cfg.system);
    CHECK(back.T == cfg.T);
    CHECK(back.R == cfg.R);
    CHECK(back.integrator.rel_tol == cfg.integrator.rel_tol);
    CHECK(back.integrator.t_max == cfg.integrator.t_max);
    CHECK(back.seed == cfg.seed);
    CHECK(back.format == cfg.format);
    CHECK(back.out_dir == cfg.out_dir);
    // and the re-serialization is byte-identical
    CHECK(back.to_json().dump() == text);
}

TEST_CASE("json writer escapes and nests") {
    JsonDoc d = JsonDoc::object();
    d.set("name", "line\nbreak\"quote\"");
    JsonDoc arr = JsonDoc::array();
    arr.push(1.5);
    arr.push(JsonDoc::object());
    d.set("items", std::move(arr));
    std::string text = d.dump();
    CHECK(text.find("\\n") != std::string::npos);
    CHECK(text.find("\\\"quote\\\"") != std::string::npos);
    CHECK(text.find("1.5") != std::string::npos);
}

TEST_CASE("claim reports serialize deterministically") {
    ClaimReport report;
    report.options.mutate_index_sign = false;
    ClaimResult r;
    r.id = "sample-claim";
    r.statement = "two plus two is four";
    r.system = "fixture";
    r.status = ClaimStatus::Pass;
    r.measured.push_back({"sum", 4.0});
    r.tolerance = "exact";
    report.claims.push_back(r);
    std::string a = claim_report_json(report).dump();
    std::string b = claim_report_json(report).dump();
    CHECK(a == b);
    CHECK(a.find("\"claim_id\": \"sample-claim\"") != std::string::npos);
    CHECK(a.find("\"all_passed\": true") != std::string::npos);
}
