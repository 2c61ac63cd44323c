#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "porolim/config.hpp"
#include "porolim/csvio.hpp"

using namespace porolim;

TEST_CASE("presets carry the published experiment parameters") {
    const auto t1 = preset("test1");
    CHECK(t1.c == 0.7);
    CHECK(t1.u0_kind == "const");
    CHECK(t1.u0_const == 1.0);
    CHECK(t1.T == 0.01);
    CHECK(t1.snapshots == std::vector<double>{0.01});
    CHECK(t1.mu == 1e-8);
    CHECK(t1.n_cells == 100);
    CHECK(t1.sigma == 0.45);

    const auto t2 = preset("test2");
    CHECK(t2.c == 0.7);
    CHECK(u0_from_config(t2)(0.2) == 0.1);
    CHECK(u0_from_config(t2)(0.5) == 0.7);
    CHECK(t2.snapshots == std::vector<double>{0.01, 0.1});

    const auto t3 = preset("test3");
    CHECK(t3.c == 1.0);
    CHECK(t3.u0_kind == "step");

    CHECK_THROWS_AS(preset("test4"), ConfigError);
}

TEST_CASE("config parsing: keys, comments, whitespace") {
    std::istringstream in(R"(# comment line
run_id = demo   # trailing comment
scheme = limit
limit.mode = faithful
mu = 1e-4

n_cells = 50
T = 0.02
snapshots = 0.01 0.02
sources.injection = dirac 0.0 1.0
sources.extraction = dirac 1.0 1.0
sources.c = 0.7
u0 = step 0.3333333333333333 0.1 0.7
recording = dense
)");
    const auto cfg = parse_config(in);
    CHECK(cfg.run_id == "demo");
    CHECK(cfg.scheme == "limit");
    CHECK(cfg.limit_mode == "faithful");
    CHECK(cfg.mu == 1e-4);
    CHECK(cfg.n_cells == 50);
    CHECK(cfg.snapshots == std::vector<double>{0.01, 0.02});
    CHECK(cfg.injection.kind == "dirac");
    CHECK(cfg.injection.x0 == 0.0);
    CHECK(cfg.extraction.x0 == 1.0);
    CHECK(cfg.u0_kind == "step");
    CHECK(cfg.recording == "dense");
}

TEST_CASE("config parsing rejects bad input") {
    std::istringstream bad_key("nonsense = 1\n");
    CHECK_THROWS_AS(parse_config(bad_key), ConfigError);
    std::istringstream bad_line("just some words\n");
    CHECK_THROWS_AS(parse_config(bad_line), ConfigError);
    std::istringstream bad_num("mu = abc\n");
    CHECK_THROWS_AS(parse_config(bad_num), ConfigError);
    std::istringstream bad_source("sources.injection = dirac 0.0\n");
    CHECK_THROWS_AS(parse_config(bad_source), ConfigError);
}

TEST_CASE("validation catches out-of-range parameters") {
    RunConfig cfg = preset("test1");
    cfg.sigma = 1.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = preset("test1");
    cfg.mu = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = preset("test1");
    cfg.snapshots = {0.5}; // beyond T
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = preset("test1");
    cfg.scheme = "magic";
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK_NOTHROW(validate(preset("test2")));
}

TEST_CASE("manifest round-trip reproduces the config") {
    RunConfig cfg = preset("test2");
    cfg.run_id = "roundtrip";
    cfg.mu = 3.25e-7;
    cfg.sigma = 0.41;
    cfg.out_dir = "/tmp/somewhere";
    cfg.recording = "dense";
    const std::string text = serialize_config(cfg);
    std::istringstream in(text);
    const auto back = parse_config(in);
    CHECK(serialize_config(back) == text);
    CHECK(back.mu == cfg.mu);
    CHECK(back.sigma == cfg.sigma);
    CHECK(back.snapshots == cfg.snapshots);
    CHECK(back.u0_step_x == cfg.u0_step_x);
}

TEST_CASE("make_setup assembles a runnable setup") {
    const RunConfig cfg = preset("test2");
    const auto model = model_from_config(cfg);
    const auto rs = make_setup(cfg, model, nullptr);
    CHECK(rs.grid.n_cells == 100);
    CHECK(rs.inj[0] == Catch::Approx(100.0));
    CHECK(rs.ext[99] == Catch::Approx(100.0));
    CHECK(rs.init.u[0] == 0.1);
    CHECK(rs.init.u[99] == 0.7);
    CHECK(rs.scheme.kind == SchemeKind::TwoPhase);
    CHECK(rs.scheme.mu == 1e-8);
}

TEST_CASE("17-digit formatting round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, -0.019199781600625885, 1e-300}) {
        const std::string s = fmt17(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("time labels are compact") {
    CHECK(time_label(0.01) == "0.01");
    CHECK(time_label(0.1) == "0.1");
}
