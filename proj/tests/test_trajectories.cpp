#include "dickesim/fullspace.hpp"
#include "dickesim/observables.hpp"
#include "dickesim/pi_liouvillian.hpp"
#include "dickesim/trajectories.hpp"

#include <doctest.h>

#include <cmath>

using namespace dickesim;

TEST_CASE("closed-system Rabi oscillation") {
    // no decay: <Sz>(t) = -(N/2) cos(2 Omega t), no jumps ever
    const int n = 4;
    const double omega = 0.9;
    ModelParams p(n, 0.0, 0.0, omega);
    const auto rec = mcwf_run(p, dicke_state_full(n, -n), 5.0, 1, 0.05);
    CHECK(rec.jumps.empty());
    for (size_t k = 0; k < rec.times.size(); ++k)
        CHECK(rec.sz[k] ==
              doctest::Approx(-0.5 * n * std::cos(2.0 * omega * rec.times[k])).epsilon(1e-6));
}

TEST_CASE("deterministic per seed") {
    ModelParams p(4, 1.0, 1.0, 1.5);
    const auto a = mcwf_run(p, dicke_state_full(4, -4), 4.0, 7, 0.1);
    const auto b = mcwf_run(p, dicke_state_full(4, -4), 4.0, 7, 0.1);
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (size_t k = 0; k < a.jumps.size(); ++k) {
        CHECK(a.jumps[k].time == b.jumps[k].time);
        CHECK(a.jumps[k].channel == b.jumps[k].channel);
    }
    CHECK((a.final_state - b.final_state).norm() == 0.0);

    const auto c = mcwf_run(p, dicke_state_full(4, -4), 4.0, 8, 0.1);
    CHECK(a.jumps.size() != c.jumps.size()); // overwhelmingly likely
}

TEST_CASE("sample grid and jump accounting") {
    ModelParams p(3, 1.0, 1.0, 2.0);
    const auto rec = mcwf_run(p, dicke_state_full(3, 3), 2.0, 3, 0.25);
    REQUIRE(!rec.times.empty());
    CHECK(rec.times.front() == doctest::Approx(0.0));
    CHECK(rec.times.back() == doctest::Approx(2.0));
    CHECK(rec.t_final == doctest::Approx(2.0));
    for (size_t k = 1; k < rec.times.size(); ++k)
        CHECK(rec.times[k] - rec.times[k - 1] == doctest::Approx(0.25).epsilon(1e-9));
    for (const auto& j : rec.jumps) {
        CHECK(j.time >= 0.0);
        CHECK(j.time <= 2.0);
        CHECK(j.channel >= -1);
        CHECK(j.channel < 3);
    }
}

TEST_CASE("ensemble average matches the master equation") {
    const int n = 4;
    ModelParams p(n, 1.0, 1.0, 1.2);
    const double t_final = 3.0;
    const int n_traj = 400;

    const auto records =
        run_ensemble(p, dicke_state_full(n, -n), t_final, 0, n_traj, 0.5, 1);
    REQUIRE(static_cast<int>(records.size()) == n_traj);

    DickeLadder ladder(n);
    const auto L = build_liouvillian_pi(p, ladder);
    auto rho = BlockDensityMatrix::ground_state(ladder);

    const auto& times = records.front().times;
    for (size_t k = 1; k < times.size(); ++k) {
        rho = evolve(L, ladder, BlockDensityMatrix::ground_state(ladder), times[k]);
        double mean = 0.0, second = 0.0;
        for (const auto& r : records) {
            mean += r.sz[k];
            second += r.sz[k] * r.sz[k];
        }
        mean /= n_traj;
        second /= n_traj;
        const double sem = std::sqrt(std::max(second - mean * mean, 1e-12) / n_traj);
        const double exact = rho.expectation(ladder, CollectiveOp::Sz).real();
        CHECK(std::abs(mean - exact) < 4.0 * sem + 1e-3);
    }
}

TEST_CASE("singlet product state") {
    for (int n : {2, 4, 6}) {
        const auto psi = prepare_singlet_product(n);
        CHECK(psi.norm() == doctest::Approx(1.0));
        FullSpaceOps ops(n);
        CHECK(s2_mean_full(ops, psi) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(sz_mean_full(ops, psi) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS(prepare_singlet_product(5));
}

TEST_CASE("quench protocol bookkeeping") {
    ModelParams p(4, 1.0, 1.0, 0.0);
    const std::vector<std::pair<double, double>> schedule = {{0.0, 2.0}, {1.0, 0.5}};
    const auto rec = quench_protocol(p, schedule, dicke_state_full(4, -4), 3.0, 5, 0.1);
    REQUIRE(rec.schedule_boundaries.size() == 1);
    CHECK(rec.schedule_boundaries[0] == doctest::Approx(1.0));
    CHECK(rec.times.back() == doctest::Approx(3.0));

    CHECK_THROWS(quench_protocol(p, {{0.5, 1.0}}, dicke_state_full(4, -4), 3.0, 5, 0.1));
    CHECK_THROWS(
        quench_protocol(p, {{0.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}}, dicke_state_full(4, -4),
                        3.0, 5, 0.1));
}

TEST_CASE("photon counting") {
    // excited non-interacting atoms: each individual channel fires exactly once
    const int n = 6;
    ModelParams p(n, 0.0, 1.0, 0.0);
    const auto rec = mcwf_run(p, dicke_state_full(n, n), 30.0, 11, 0.5);
    CHECK(static_cast<int>(rec.jumps.size()) == n);
    std::vector<int> seen(n, 0);
    for (const auto& j : rec.jumps) {
        REQUIRE(j.channel >= 0);
        seen[j.channel] += 1;
    }
    for (int a = 0; a < n; ++a)
        CHECK(seen[a] == 1);

    const auto perp = photon_counts(rec, 5.0, DetectorPort::Perpendicular);
    const auto par = photon_counts(rec, 5.0, DetectorPort::Parallel);
    int total = 0;
    for (int c : perp)
        total += c;
    CHECK(total == n);
    for (int c : par)
        CHECK(c == 0);
}

TEST_CASE("switch detection on a synthetic telegraph") {
    TrajectoryRecord rec;
    rec.seed = 0;
    const double dt = 0.1;
    // alternate 40-sample dwells: sz = -4 (plus phase) and sz = -1 (minus phase)
    const int dwell = 40, cycles = 6;
    double t = 0.0;
    for (int c = 0; c < 2 * cycles; ++c) {
        const double level = (c % 2 == 0) ? -4.0 : -1.0;
        for (int k = 0; k < dwell; ++k) {
            rec.times.push_back(t);
            rec.sz.push_back(level);
            rec.s2.push_back(0.0);
            rec.intensity.push_back(0.0);
            t += dt;
        }
    }
    rec.t_final = t;

    const auto stats = detect_switches(rec, -3.0, -2.0);
    CHECK(stats.sufficient);
    CHECK(stats.transitions == 2 * cycles - 1);
    CHECK(stats.dwell_plus.size() >= static_cast<size_t>(cycles - 1));
    CHECK(stats.dwell_minus.size() >= static_cast<size_t>(cycles - 1));
    const double expected_rate = 1.0 / (dwell * dt);
    CHECK(stats.rate_plus == doctest::Approx(expected_rate).epsilon(0.1));
    CHECK(stats.rate_minus == doctest::Approx(expected_rate).epsilon(0.1));
    CHECK(stats.plus_to_minus_windows.size() == static_cast<size_t>(cycles));
    for (const auto& [lo, hi] : stats.plus_to_minus_windows) {
        CHECK(lo >= 0);
        CHECK(hi > lo);
        CHECK(rec.sz[lo] < -3.0);
        CHECK(rec.sz[hi] > -2.0);
    }

    // featureless signal: nothing detected
    TrajectoryRecord flat = rec;
    std::fill(flat.sz.begin(), flat.sz.end(), -2.5);
    const auto none = detect_switches(flat, -3.0, -2.0);
    CHECK(!none.sufficient);
    CHECK(none.transitions == 0);
}

TEST_CASE("crss fidelity column") {
    const int n = 4;
    ModelParams p(n, 2.0, 1.0, 0.0);
    p.omega = 0.5 * p.omega_c();
    const auto crss = crss_full(n, Complex(0.0, -0.5 * n) * 0.5);
    const auto rec = mcwf_run(p, dicke_state_full(n, -n), 2.0, 1, 0.2, &crss);
    REQUIRE(rec.crss_fidelity.size() == rec.times.size());
    for (double f : rec.crss_fidelity) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-12);
    }
}
