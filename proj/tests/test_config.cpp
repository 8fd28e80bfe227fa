#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "shrinkerlab/io.hpp"
#include "shrinkerlab/runner.hpp"

using namespace shrinkerlab;

TEST_CASE("config round trips through json") {
    SolverConfig cfg;
    cfg.nr = 193;
    cfg.ntheta = 49;
    cfg.boundary = {{1, 0.25}, {3, -0.5}};
    cfg.eps_fraction = 0.25;
    cfg.tau_max = 12.5;
    cfg.checks = {"sandwich", "cone_decay"};
    cfg.seed = 777;

    const SolverConfig back = SolverConfig::from_json_text(cfg.to_json_text());
    CHECK(back.to_json_text() == cfg.to_json_text());
    CHECK(back.nr == cfg.nr);
    CHECK(back.boundary == cfg.boundary);
    CHECK(back.eps_fraction == cfg.eps_fraction);
    CHECK(back.checks == cfg.checks);
    CHECK(back.seed == cfg.seed);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SolverConfig bad = cfg;
    bad.boundary = {{2, 0.1}};
    CHECK_THROWS(bad.validate());

    bad = cfg;
    bad.spacing = "chebyshev";
    CHECK_THROWS(bad.validate());

    bad = cfg;
    bad.c_cfl = 0.0;
    CHECK_THROWS(bad.validate());

    bad = cfg;
    bad.R0 = 1.5;  // above R
    CHECK_THROWS(bad.validate());
}

TEST_CASE("inadmissible amplitude is a config error unless forced") {
    SolverConfig cfg;
    cfg.nr = 65;
    cfg.ntheta = 17;
    cfg.eps_fraction = 2.0;  // twice the admissible threshold
    auto grid = make_grid(cfg);
    CHECK_THROWS_AS((void)resolve_boundary(cfg, grid), ConfigError);

    cfg.force = true;
    CHECK_NOTHROW((void)resolve_boundary(cfg, grid));
}

TEST_CASE("field snapshots round trip") {
    auto grid = SectorGrid::create(1.0, 16.0, 65, 17, 5, RadialSpacing::LogGraded);
    Field u(grid, true);
    for (int i = 0; i < u.nr(); ++i)
        for (int j = 1; j + 1 < u.ntheta(); ++j)
            u.v(i, j) = std::sin(5 * grid->theta()[j]) / grid->r()[i];

    const std::string path = "/tmp/shrinkerlab_field_roundtrip.csv";
    write_field_csv(path, u);
    const Field back = read_field_csv(path, grid, true);
    CHECK((back.v == u.v).all());  // 17 significant digits are lossless
    std::remove(path.c_str());
}

TEST_CASE("artifacts are written") {
    SolverConfig cfg;
    cfg.nr = 65;
    cfg.ntheta = 17;
    cfg.output_dir = "/tmp/shrinkerlab_artifacts_test";
    std::filesystem::remove_all(cfg.output_dir);
    const RunArtifacts art = run_pipeline(cfg, true);
    write_artifacts(cfg.output_dir, cfg, art);
    for (const char* name : {"config.json", "diagnostics.csv", "u_final.csv",
                             "barrier_certificate.json", "verification_report.json",
                             "run_summary.json"})
        CHECK(std::filesystem::exists(cfg.output_dir + "/" + name));
    std::filesystem::remove_all(cfg.output_dir);
}
