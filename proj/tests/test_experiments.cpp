#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqlab/experiments.hpp"

using namespace sqlab;

TEST_CASE("power law fitting") {
    std::vector<std::pair<double, double>> sq;
    for (double x : {1.0, 2.0, 3.0, 4.0, 5.0}) sq.push_back({x, x * x});
    PowerLawFit f = fit_power_law(sq, true);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.residual < 1e-12);

    std::vector<std::pair<double, double>> flat = {{1, 3}, {2, 3}, {4, 3}};
    CHECK(fit_power_law(flat, true).slope == doctest::Approx(0.0));
    CHECK(fit_power_law(flat, false).slope == doctest::Approx(0.0));

    CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, 2}}, true), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{2, 1}, {2, 2}, {2, 3}}, false), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, -2}, {3, 3}}, true), std::invalid_argument);
}

TEST_CASE("config validation per mode") {
    ExperimentConfig c;
    c.kind = "boundedness";
    c.mode = "pair";
    c.p = 4.0;
    c.q = 4.0;
    CHECK_NOTHROW(c.validate());
    CHECK(c.r() == doctest::Approx(2.0));
    CHECK(c.r_dual() == doctest::Approx(2.0));

    c.p = 2.0;  // boundary excluded in the pair mode
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.p = 5.0;
    c.q = 5.0;  // r = 2.5, so r' = 5/3 < 2
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.mode = "exploratory";  // same exponents tabulate fine
    CHECK_NOTHROW(c.validate());

    c.mode = "sequence";
    c.p = 0.5;
    c.q = 0.9;  // 1/r = 2 + 10/9 too large
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.p = 4.0;
    c.q = 4.0;
    CHECK_NOTHROW(c.validate());

    c.kind = "counterexample";
    c.p_range = {8, 16};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.p_range = {8, 16, 4096};  // beyond the grid
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c.kind = "nonsense";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("config json parsing") {
    ExperimentConfig c = ExperimentConfig::from_json(
        R"({"kind":"boundedness","mode":"sequence","n":512,"length":8,"p":3,"q":3,
            "trials":5,"seed":9,"strips":{"width":8,"n_max":7},
            "collection":{"width":16,"gap":48,"seeds":1}})");
    CHECK(c.n == 512);
    CHECK(c.mode == "sequence");
    CHECK(c.seed == 9);
    CHECK(c.strip_width == 8);
    CHECK(c.strip_n_max == 7);
    CHECK(c.collection.gap == 48);
    CHECK(c.p == 3.0);
}

TEST_CASE("counterexample run recovers the indicator scaling") {
    ExperimentConfig c;
    c.kind = "counterexample";
    c.n = 4096;
    c.length = 16;
    c.p = 1.5;
    c.q = 2.0;
    c.p_range = {8, 16, 32};
    ExperimentReport rep = run_counterexample(c);
    CHECK(rep.pass());
    CHECK(rep.rows.size() == 3);
    CHECK(std::fabs(rep.metric("scaling_slope") - 1.0 / 6.0) <= 0.1);
}

TEST_CASE("boundedness sweep is deterministic and calibrated") {
    ExperimentConfig c;
    c.kind = "boundedness";
    c.mode = "pair";
    c.n = 512;
    c.length = 16;
    c.trials = 5;
    ExperimentReport a = run_boundedness(c);
    ExperimentReport b = run_boundedness(c);
    CHECK(a.pass());
    CHECK(a.metric("max_ratio") <= c.calibration);
    CHECK(emit(a, "json") == emit(b, "json"));
    CHECK(emit(a, "csv") == emit(b, "csv"));
}

TEST_CASE("tile audit aggregates all the tile checks") {
    ExperimentConfig c;
    c.kind = "tile-audit";
    c.n = 512;
    c.length = 8;
    c.trials = 3;
    ExperimentReport rep = run_tile_audit(c);
    CHECK(rep.pass());
    CHECK(rep.metric("tree_draws") >= 3);
    CHECK(rep.metric("orthogonality_constant") <= 8.0);
    CHECK(rep.metric("envelope_constant") <= 64.0);
}

TEST_CASE("emission formats") {
    ExperimentReport rep;
    rep.kind = "demo";
    rep.columns = {"x", "y"};
    rep.rows = {{1.0, 2.0}, {2.0, 4.0}};
    rep.metrics = {{"alpha", 0.123456789012345}};
    rep.verdicts = {{"ok", true}};

    std::string j = emit(rep, "json");
    CHECK(j.find("0.123456789012") != std::string::npos);  // 12 significant digits
    ExperimentReport back = report_from_json(j);
    CHECK(emit(back, "json") == j);
    CHECK(back.pass());

    std::string csv = emit(rep, "csv");
    CHECK(csv.substr(0, 4) == "x,y\n");
    std::string svg = emit(rep, "svg");
    CHECK(svg.find("<polyline") != std::string::npos);

    ExperimentReport empty;
    empty.kind = "empty";
    CHECK(emit(empty, "csv") == "\n");
    CHECK(report_from_json(emit(empty, "json")).rows.empty());
    CHECK_THROWS_AS(emit(empty, "svg"), std::invalid_argument);
    CHECK_THROWS_AS(emit(rep, "yaml"), std::invalid_argument);
}

TEST_CASE("tile picture") {
    Collection C = build_collection(Grid(512, 8), StripFamily(0, 16, 48, -4, 4, 8), 2, 1, 1);
    std::string svg = svg_tile_picture(C);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg == svg_tile_picture(C));
}
