#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "porolim/config.hpp"
#include "porolim/diagnostics.hpp"

using namespace porolim;

namespace {

Trajectory stationary_trajectory(std::size_t n_cells, double u_val, std::size_t steps) {
    Trajectory t;
    t.dense = true;
    SimState s;
    s.u.assign(n_cells, u_val);
    t.states.push_back(s);
    for (std::size_t k = 0; k < steps; ++k) {
        s.t += 1e-4;
        t.states.push_back(s);
        t.dts.push_back(1e-4);
    }
    return t;
}

RunSetup zero_source_setup(const ConstitutiveModel& m) {
    RunSetup rs;
    rs.model = m;
    rs.scheme = SchemeSpec{SchemeKind::TwoPhase, 1e-2, false, false};
    rs.grid = build_grid(40);
    rs.inj.assign(40, 0.0);
    rs.ext.assign(40, 0.0);
    rs.c = 0.7;
    rs.init = initial_state([](double x) { return x < 0.5 ? 0.2 : 0.8; }, rs.grid);
    rs.T = 2e-3;
    rs.dense = true;
    return rs;
}

} // namespace

TEST_CASE("uniform trajectories yield zero for every functional") {
    const auto m = builtin_test_model();
    const auto g = build_grid(8);
    const auto traj = stationary_trajectory(8, 0.4, 5);
    CHECK(est_air_energy(traj, g, m, 1e-2).value == 0.0);
    CHECK(est_air_energy_via_pressure(traj, g, m, 1e-2) == 0.0);
    CHECK(est_pressure_energy(traj, g, m, 1e-2).value == 0.0);
    CHECK(est_zeta_energy(traj, g, m).value == 0.0);
    CHECK(est_g_energy(traj, g, m).value == 0.0);
    CHECK(space_translate(traj, g, m, 2).value == 0.0);
    CHECK(time_translate(traj, g, m, 2).value == 0.0);
}

TEST_CASE("zero translate distances give zero") {
    const auto m = builtin_test_model();
    const auto g = build_grid(8);
    Trajectory traj = stationary_trajectory(8, 0.4, 5);
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        traj.states[i].u[3] = 0.1 + 0.05 * static_cast<double>(i); // not uniform
    CHECK(space_translate(traj, g, m, 0).value == 0.0);
    CHECK(time_translate(traj, g, m, 0).value == 0.0);
}

TEST_CASE("sparse trajectories are rejected") {
    const auto m = builtin_test_model();
    const auto g = build_grid(8);
    Trajectory sparse = stationary_trajectory(8, 0.4, 5);
    sparse.dense = false;
    CHECK_THROWS_AS(est_air_energy(sparse, g, m, 1e-2), InsufficientDataError);
    CHECK_THROWS_AS(est_pressure_energy(sparse, g, m, 1e-2), InsufficientDataError);
    CHECK_THROWS_AS(space_translate(sparse, g, m, 1), InsufficientDataError);
}

TEST_CASE("synthetic two-cell pressure energy matches a hand sum") {
    const auto m = builtin_test_model();
    const auto g = build_grid(2);
    Trajectory traj;
    traj.dense = true;
    SimState a;
    a.u = {0.2, 0.6};
    SimState b = a;
    b.t = 1e-3;
    b.u = {0.3, 0.5};
    traj.states = {a, b};
    traj.dts = {1e-3};
    // start-of-step weighting: only state a contributes. The reference uses
    // the same tight quadrature budget as the node-exact tabulation.
    const Quadrature tight{1e-13, 48, 1e-3};
    const double mu = 1e-2;
    const double dP = -(eval_R(m, mu, 0.6, tight) - eval_R(m, mu, 0.2, tight)) / g.h;
    const double expected = 1e-3 * g.h * dP * dP;
    CHECK(est_pressure_energy(traj, g, m, mu).value ==
          Catch::Approx(expected).epsilon(1e-9));

    const double dz = (eval_zeta(m, 0.6, tight) - eval_zeta(m, 0.2, tight)) / g.h;
    CHECK(est_zeta_energy(traj, g, m).value ==
          Catch::Approx(1e-3 * g.h * dz * dz).epsilon(1e-9));

    const double dQ = (eval_Q(m, mu, 0.6, tight) - eval_Q(m, mu, 0.2, tight)) / g.h;
    CHECK(est_air_energy(traj, g, m, mu).value ==
          Catch::Approx(1e-3 * g.h * m.k_a(0.2) * dQ * dQ).epsilon(1e-9));
}

TEST_CASE("air-energy dual route agreement") {
    const auto m = builtin_test_model();
    RunSetup rs = zero_source_setup(m);
    const auto traj = run_simulation(rs);
    const double via_Q = est_air_energy(traj, rs.grid, m, 1e-2).value;
    const double via_P = est_air_energy_via_pressure(traj, rs.grid, m, 1e-2);
    CHECK(via_Q > 0.0);
    CHECK(std::abs(via_P - via_Q) <= 1e-10 * via_Q);
}

TEST_CASE("stationary zero-source run: all functionals vanish") {
    const auto m = builtin_test_model();
    RunSetup rs = zero_source_setup(m);
    rs.init = initial_state([](double) { return 0.5; }, rs.grid);
    const auto traj = run_simulation(rs);
    CHECK(est_air_energy(traj, rs.grid, m, 1e-2).value == 0.0);
    CHECK(est_pressure_energy(traj, rs.grid, m, 1e-2).value == 0.0);
    CHECK(est_zeta_energy(traj, rs.grid, m).value == 0.0);
    CHECK(est_g_energy(traj, rs.grid, m).value == 0.0);
    CHECK(space_translate(traj, rs.grid, m, 3).value == 0.0);
    CHECK(time_translate(traj, rs.grid, m, 3).value == 0.0);
}

TEST_CASE("estimate values are nonnegative on an evolving run") {
    const auto m = builtin_test_model();
    RunSetup rs = zero_source_setup(m);
    const auto traj = run_simulation(rs);
    CHECK(est_air_energy(traj, rs.grid, m, 1e-2).value >= 0.0);
    CHECK(est_pressure_energy(traj, rs.grid, m, 1e-2).value >= 0.0);
    CHECK(est_zeta_energy(traj, rs.grid, m).value >= 0.0);
    CHECK(est_g_energy(traj, rs.grid, m).value >= 0.0);
    for (std::size_t k : {1, 2, 4})
        CHECK(space_translate(traj, rs.grid, m, k).value >= 0.0);
    for (std::size_t mm : {1, 2, 4})
        CHECK(time_translate(traj, rs.grid, m, mm).value >= 0.0);
}

TEST_CASE("air pressure flatness") {
    SimState s;
    s.u = {0.4, 0.4, 0.4};
    s.p_g = {1.5, 1.5, 1.5};
    CHECK(air_pressure_flatness(s, 0.95) == 0.0);

    s.p_g = {1.0, 1.4, 1.1};
    CHECK(air_pressure_flatness(s, 0.95) == Catch::Approx(0.4));

    SimState full;
    full.u = {1.0, 1.0};
    full.p_g = {2.0, 5.0};
    CHECK(air_pressure_flatness(full, 0.95) == 0.0); // no qualifying cells

    SimState bare;
    bare.u = {0.4};
    CHECK_THROWS_AS(air_pressure_flatness(bare, 0.95), InsufficientDataError);
}

TEST_CASE("mu sweep determinism and validation") {
    const auto m = builtin_test_model();
    RunConfig cfg = preset("test1");
    cfg.T = 2e-3;
    cfg.snapshots = {2e-3};
    const RunSetup base = make_setup(cfg, m, nullptr);

    const auto rep = mu_sweep(base, {1e-2, 1e-2}, true, 8);
    CHECK(rep.l2_diff[0] == rep.l2_diff[1]);
    CHECK(rep.sup_diff_final[0] == rep.sup_diff_final[1]);
    CHECK(rep.est1_vals[0] == rep.est1_vals[1]);

    CHECK_THROWS_AS(mu_sweep(base, {}, true), ConfigError);
    CHECK_THROWS_AS(mu_sweep(base, {1e-4, 1e-2}, true), ConfigError);
    CHECK_THROWS_AS(mu_sweep(base, {2.0}, true), ConfigError);
}
