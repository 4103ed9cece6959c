// Acceptance checks for the simulator: one numbered criterion per invocation,
//   acceptance --criterion <1..11>
// Each criterion prints one PASS/FAIL line (plus detail lines prefixed with
// two spaces) and the process exits 0 on pass, 1 on fail. All tolerances are
// pinned here as named constants.

#include "dickesim/fullspace.hpp"
#include "dickesim/meanfield.hpp"
#include "dickesim/observables.hpp"
#include "dickesim/pi_liouvillian.hpp"
#include "dickesim/squeezing.hpp"
#include "dickesim/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace dickesim;

namespace {

int g_failures = 0;

void check(bool ok, const char* what, double got, double want, double tol) {
    std::printf("  %-58s %s  (got % .6g, want % .6g, tol %.3g)\n", what,
                ok ? "ok" : "FAIL", got, want, tol);
    if (!ok)
        ++g_failures;
}

void check_flag(bool ok, const char* what) {
    std::printf("  %-58s %s\n", what, ok ? "ok" : "FAIL");
    if (!ok)
        ++g_failures;
}

BlockDensityMatrix steady_for(const ModelParams& p, const DickeLadder& ladder) {
    return steady_state_pi(build_liouvillian_pi(p, ladder), ladder);
}

MetastablePair decompose_for(const ModelParams& p, const DickeLadder& ladder) {
    const auto L = build_liouvillian_pi(p, ladder);
    const auto steady = steady_state_pi(L, ladder);
    const auto gap = spectral_gap(L, ladder, GapMethod::Auto, &steady);
    return metastable_decomposition(ladder, steady, gap);
}

// ---------------------------------------------------------------- criterion 1
// Block solver vs full-space oracle: random parameter points, observables
// agree to 1e-7.
void criterion_1() {
    constexpr double kTol = 1e-7;
    constexpr int kPointsPerN = 10;
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> rate(0.2, 3.0);
    std::uniform_real_distribution<double> drive(0.2, 1.2);
    for (int n = 2; n <= 6; ++n) {
        DickeLadder ladder(n);
        const auto basis = angular_basis(n);
        double worst = 0.0;
        for (int k = 0; k < kPointsPerN; ++k) {
            ModelParams p(n, rate(rng), 1.0, drive(rng) * n);
            const auto a = observable_set(steady_for(p, ladder), ladder);
            const auto rho_full =
                block_from_full(steady_state_full(build_liouvillian_full(p)), ladder, basis);
            const auto b = observable_set(rho_full, ladder);
            worst = std::max({worst, std::abs(a.sz_mean - b.sz_mean),
                              std::abs(a.s2_mean - b.s2_mean),
                              std::abs(a.intensity - b.intensity),
                              std::abs(a.g2_zero - b.g2_zero)});
            for (const auto& [m2, prob] : a.pm_distribution)
                worst = std::max(worst, std::abs(prob - b.pm_distribution.at(m2)));
        }
        check(worst < kTol, ("N = " + std::to_string(n) + " worst observable delta").c_str(),
              worst, 0.0, kTol);
    }
}

// ---------------------------------------------------------------- criterion 2
// Strong drive pushes the N = 18 steady state toward the totally mixed state.
void criterion_2() {
    const int n = 18;
    DickeLadder ladder(n);
    ModelParams p(n, 10.0, 1.0, 0.0);
    p.omega = 3.0 * p.omega_c();
    const auto obs = observable_set(steady_for(p, ladder), ladder);
    const auto ref = mixed_state_reference(n);
    check(std::abs(obs.intensity - ref.intensity) < 0.05 * ref.intensity,
          "<S+S-> within 5% of N/2", obs.intensity, ref.intensity, 0.05 * ref.intensity);
    check(std::abs(obs.g2_zero - ref.g2_zero) < 0.05 * ref.g2_zero,
          "g2(0) within 5% of 2(1 - 1/N)", obs.g2_zero, ref.g2_zero, 0.05 * ref.g2_zero);
    check(std::abs(obs.s2_mean - ref.s2_mean) < 0.15 * ref.s2_mean,
          "<S^2> within 15% of 3N/4", obs.s2_mean, ref.s2_mean, 0.15 * ref.s2_mean);
}

double steady_sz(int n, double omega) {
    DickeLadder ladder(n);
    ModelParams p(n, 10.0, 1.0, omega);
    return steady_for(p, ladder).expectation(ladder, CollectiveOp::Sz).real();
}

// ---------------------------------------------------------------- criterion 3
// Finite-size transition point: monotone in N and extrapolating to ~0.61.
void criterion_3() {
    const std::vector<int> ns = {18, 20, 22, 24, 26, 28, 30, 32};
    const auto est = estimate_pt_point(ns, 10.0, 1.0, steady_sz);
    bool monotone = true;
    for (size_t k = 0; k < est.n_values.size(); ++k) {
        std::printf("  N = %2d  omega_pt = %.4f omega_c\n", est.n_values[k],
                    est.omega_pt_ratio[k]);
        if (k > 0 && est.omega_pt_ratio[k] >= est.omega_pt_ratio[k - 1])
            monotone = false;
    }
    check_flag(monotone, "omega_pt strictly decreasing toward the limit");
    check(est.extrapolated_ratio > 0.58 && est.extrapolated_ratio < 0.64,
          "extrapolated omega_pt in [0.58, 0.64] omega_c", est.extrapolated_ratio, 0.61,
          0.03);
}

// ---------------------------------------------------------------- criterion 4
// Bimodal magnetization at the N = 32 transition point.
void criterion_4() {
    const int n = 32;
    constexpr double kPeakTol = 2.0; // |m_peak - m_meanfield| in units of m
    const auto est = estimate_pt_point({n}, 10.0, 1.0, steady_sz);
    const double ratio = est.omega_pt_ratio.front();
    std::printf("  omega_pt(N=%d) = %.4f omega_c\n", n, ratio);

    DickeLadder ladder(n);
    ModelParams p(n, 10.0, 1.0, 0.0);
    p.omega = ratio * p.omega_c();
    const auto pm = magnetization_distribution(steady_for(p, ladder), ladder);

    std::vector<double> m_axis, prob;
    for (const auto& [m2, pr] : pm) {
        m_axis.push_back(0.5 * m2);
        prob.push_back(pr);
    }
    // 3-point moving average, then interior local maxima
    std::vector<double> smooth(prob.size(), 0.0);
    for (size_t k = 0; k < prob.size(); ++k) {
        const double left = k > 0 ? prob[k - 1] : prob[k];
        const double right = k + 1 < prob.size() ? prob[k + 1] : prob[k];
        smooth[k] = (left + prob[k] + right) / 3.0;
    }
    std::vector<double> peaks;
    for (size_t k = 1; k + 1 < smooth.size(); ++k)
        if (smooth[k] > smooth[k - 1] && smooth[k] > smooth[k + 1])
            peaks.push_back(m_axis[k]);
    std::printf("  peaks at m =");
    for (double m : peaks)
        std::printf(" %.1f", m);
    std::printf("\n");
    check_flag(peaks.size() == 2, "exactly two local maxima after smoothing");

    std::vector<double> mf_m;
    for (const auto& b : mf_steady_states(MfParams::from_model(p)))
        if (b.stability == Stability::Stable)
            mf_m.push_back(0.5 * n * b.state.sz);
    check_flag(mf_m.size() == 2, "two stable mean-field branches at omega_pt");
    if (peaks.size() == 2 && mf_m.size() == 2) {
        std::sort(peaks.begin(), peaks.end());
        std::sort(mf_m.begin(), mf_m.end());
        check(std::abs(peaks[0] - mf_m[0]) <= kPeakTol, "lower peak near mean-field m",
              peaks[0], mf_m[0], kPeakTol);
        check(std::abs(peaks[1] - mf_m[1]) <= kPeakTol, "upper peak near mean-field m",
              peaks[1], mf_m[1], kPeakTol);
    }
}

// ---------------------------------------------------------------- criterion 5
// Exponential closing of the Liouvillian gap with N.
void criterion_5() {
    constexpr double kMinR2 = 0.95;
    std::vector<double> ns, logs;
    bool decreasing = true;
    double prev = 1e300;
    for (int n = 6; n <= 18; n += 2) {
        DickeLadder ladder(n);
        ModelParams p(n, 10.0, 1.0, 0.0);
        p.omega = 0.61 * p.omega_c();
        const auto L = build_liouvillian_pi(p, ladder);
        const auto steady = steady_state_pi(L, ladder);
        const auto gap = spectral_gap(L, ladder, GapMethod::Auto, &steady);
        std::printf("  N = %2d  lambda1 = %.6g\n", n, gap.lambda1);
        if (gap.lambda1 >= prev)
            decreasing = false;
        prev = gap.lambda1;
        ns.push_back(n);
        logs.push_back(std::log(gap.lambda1));
    }
    check_flag(decreasing, "lambda1 strictly decreasing in N");

    // least-squares R^2 of log(lambda1) vs N
    const size_t k = ns.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < k; ++i) {
        sx += ns[i];
        sy += logs[i];
        sxx += ns[i] * ns[i];
        sxy += ns[i] * logs[i];
        syy += logs[i] * logs[i];
    }
    const double cov = sxy - sx * sy / k;
    const double vx = sxx - sx * sx / k;
    const double vy = syy - sy * sy / k;
    const double r2 = cov * cov / (vx * vy);
    check(r2 >= kMinR2, "log(lambda1) vs N linear fit R^2", r2, 1.0, 1.0 - kMinR2);
}

// ---------------------------------------------------------------- criterion 6
// Metastable pair at N = 18, omega = 0.73 omega_c: branch magnetizations and
// steady-state weights.
void criterion_6() {
    const int n = 18;
    constexpr double kBranchTol = 0.05; // fraction of N/2
    constexpr double kWeightTol = 0.1;
    DickeLadder ladder(n);
    ModelParams p(n, 10.0, 1.0, 0.0);
    p.omega = 0.73 * p.omega_c();
    const auto pair = decompose_for(p, ladder);

    double mf_lower = 0.0, mf_upper = 0.0;
    for (const auto& b : mf_steady_states(MfParams::from_model(p))) {
        if (b.stability != Stability::Stable)
            continue;
        if (b.label == BranchLabel::Lower)
            mf_lower = 0.5 * n * b.state.sz;
        else
            mf_upper = 0.5 * n * b.state.sz;
    }
    const double szp = pair.rho_plus.expectation(ladder, CollectiveOp::Sz).real();
    const double szm = pair.rho_minus.expectation(ladder, CollectiveOp::Sz).real();
    check(std::abs(szp - mf_lower) < kBranchTol * 0.5 * n,
          "Tr[Sz rho_plus] near the lower mean-field branch", szp, mf_lower,
          kBranchTol * 0.5 * n);
    check(std::abs(szm - mf_upper) < kBranchTol * 0.5 * n,
          "Tr[Sz rho_minus] near the upper mean-field branch", szm, mf_upper,
          kBranchTol * 0.5 * n);
    check(std::abs(pair.a_plus - 0.4) <= kWeightTol, "a_plus = 0.4 +- 0.1", pair.a_plus,
          0.4, kWeightTol);
    check(std::abs(pair.a_minus - 0.5) <= kWeightTol, "a_minus = 0.5 +- 0.1", pair.a_minus,
          0.5, kWeightTol);
}

// ---------------------------------------------------------------- criterion 7
// rho_plus stays CRSS-like across the lower part of the drive range.
void criterion_7() {
    const int n = 18;
    constexpr double kMinFidelity = 0.9;
    constexpr double kG2Tol = 0.1;
    DickeLadder ladder(n);
    for (double ratio : {0.3, 0.4, 0.5, 0.6}) {
        ModelParams p(n, 10.0, 1.0, 0.0);
        p.omega = ratio * p.omega_c();
        const auto pair = decompose_for(p, ladder);
        const auto crss = crss_state(n, Complex(0.0, -0.5 * n * ratio));
        const double fid = fidelity_pure(pair.rho_plus, ladder, crss.amplitudes);
        const double g2 = g2_zero(pair.rho_plus, ladder);
        char label[64];
        std::snprintf(label, sizeof label, "omega = %.1f omega_c: F(rho_plus, CRSS)",
                      ratio);
        check(fid >= kMinFidelity, label, fid, 1.0, 1.0 - kMinFidelity);
        std::snprintf(label, sizeof label, "omega = %.1f omega_c: |g2(rho_plus) - 1|",
                      ratio);
        check(std::abs(g2 - 1.0) <= kG2Tol, label, g2, 1.0, kG2Tol);
    }
}

// ---------------------------------------------------------------- criterion 8
// Spin squeezing: closed-form limit, analytic-vs-numeric agreement, and the
// purely collective limit.
void criterion_8() {
    // (a) the large-Gamma closed form reaches 1/sqrt(3) at omega = omega_c/sqrt(2);
    // the finite-ratio correlators at Gamma/gamma = 1e4 agree with the closed
    // form away from the edge (exactly at the edge they carry a sqrt(gamma/Gamma)
    // ~ 1% correction, so the closed form is the right comparator there)
    {
        constexpr double kTol = 1e-3;
        const double edge = xi2_large_gamma_limit(1.0 / std::sqrt(2.0));
        check(std::abs(edge - 1.0 / std::sqrt(3.0)) < kTol,
              "closed-form xi^2 at the window edge equals 1/sqrt(3)", edge,
              1.0 / std::sqrt(3.0), kTol);
        const double near = xi2_analytic(MfParams{1.0, 1e4, 0.7 * 1e4 / 4.0}).xi2;
        check(std::abs(near - xi2_large_gamma_limit(0.7)) < kTol,
              "correlators at Gamma/gamma = 1e4 match the closed form", near,
              xi2_large_gamma_limit(0.7), kTol);
    }
    // (b) N = 18: analytic xi^2 tracks the numeric value on rho_plus
    {
        constexpr double kTol = 0.05;
        const int n = 18;
        DickeLadder ladder(n);
        for (double ratio : {0.2, 0.3, 0.4, 0.5, 0.6}) {
            ModelParams p(n, 10.0, 1.0, 0.0);
            p.omega = ratio * p.omega_c();
            const auto pair = decompose_for(p, ladder);
            const double numeric = spin_squeezing_numeric(pair.rho_plus, ladder);
            const double analytic = xi2_analytic(MfParams::from_model(p), n).xi2;
            char label[64];
            std::snprintf(label, sizeof label, "omega = %.1f omega_c: |xi2_an - xi2_num|",
                          ratio);
            check(std::abs(analytic - numeric) <= kTol, label, analytic, numeric, kTol);
        }
    }
    // (c) gamma_s = 0: xi^2 = sqrt(1 - (omega/omega_c)^2) exactly
    {
        constexpr double kTol = 1e-9;
        for (double r : {0.2, 0.5, 0.8}) {
            ModelParams p(18, 1.0, 0.0, 0.0);
            const MfParams mf = MfParams::from_model(p);
            const double xi2 = xi2_analytic({mf.gamma, mf.Gamma, r * mf.omega_c()}).xi2;
            char label[64];
            std::snprintf(label, sizeof label, "gamma_s = 0, r = %.1f: xi^2", r);
            check(std::abs(xi2 - std::sqrt(1.0 - r * r)) < kTol, label, xi2,
                  std::sqrt(1.0 - r * r), kTol);
        }
    }
}

// ---------------------------------------------------------------- criterion 9
// Mean-field property suite.
void criterion_9() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // every root zeroes the rhs
    double worst_rhs = 0.0;
    for (int k = 0; k < 200; ++k) {
        const MfParams p{0.2 + 2.0 * unif(rng), 5.0 + 200.0 * unif(rng),
                         0.05 + 60.0 * unif(rng)};
        for (const auto& b : mf_steady_states(p)) {
            const auto r = mf_rhs(b.state, p);
            worst_rhs = std::max({worst_rhs, std::abs(r.sx), std::abs(r.sy), std::abs(r.sz)});
        }
    }
    check(worst_rhs < 1e-10, "max |rhs| over all roots (200 random params)", worst_rhs,
          0.0, 1e-10);

    // root counts across the closed-form window; middle branch unstable
    const MfParams base{1.0, 15.0, 0.0};
    const auto window = bistability_window(base);
    bool counts_ok = window.has_value();
    bool middle_ok = true;
    for (int k = 0; k < 200 && counts_ok; ++k) {
        const double ratio = 0.01 + 1.3 * k / 199.0;
        const MfParams p{1.0, 15.0, ratio * 15.0 / 4.0};
        const auto branches = mf_steady_states(p);
        const bool inside = ratio > window->first + 1e-3 && ratio < window->second - 1e-3;
        const bool outside = ratio < window->first - 1e-3 || ratio > window->second + 1e-3;
        if (inside && branches.size() != 3)
            counts_ok = false;
        if (outside && branches.size() != 1)
            counts_ok = false;
        for (const auto& b : branches)
            if (b.label == BranchLabel::Middle && b.stability != Stability::Unstable)
                middle_ok = false;
    }
    check_flag(counts_ok, "3 roots inside / 1 outside the closed-form window");
    check_flag(middle_ok, "middle branch always Jacobian-unstable");

    // random initial conditions terminate on a stable branch
    const MfParams p{1.0, 15.0, 0.75 * 15.0 / 4.0};
    std::vector<MeanFieldState> stable;
    for (const auto& b : mf_steady_states(p))
        if (b.stability == Stability::Stable)
            stable.push_back(b.state);
    double worst_dist = 0.0;
    for (int k = 0; k < 100; ++k) {
        MeanFieldState ic{2 * unif(rng) - 1, 2 * unif(rng) - 1, 2 * unif(rng) - 1};
        const double r = std::sqrt(ic.norm2());
        if (r > 1.0) {
            ic.sx /= r;
            ic.sy /= r;
            ic.sz /= r;
        }
        const auto path = mf_integrate(ic, p, 80.0, 20.0);
        const auto& end = path.back().second;
        double best = 1e300;
        for (const auto& s : stable)
            best = std::min(best,
                            std::hypot(end.sx - s.sx, end.sy - s.sy, end.sz - s.sz));
        worst_dist = std::max(worst_dist, best);
    }
    check(worst_dist < 1e-5, "100 random flows all land on a stable branch", worst_dist,
          0.0, 1e-5);
}

// --------------------------------------------------------------- criterion 10
// Trajectory unraveling: ensemble mean vs master equation, switching-rate
// telegraph statistics, photon counting, and the jump content of the
// plus -> minus transitions.
void criterion_10() {
    // (a) N = 6 ensemble vs the master equation
    {
        const int n = 6;
        const int n_traj = 1000;
        const double t_final = 3.0, sample_dt = 0.25;
        ModelParams p(n, 2.0, 1.0, 3.0);
        const auto ens = run_ensemble(p, dicke_state_full(n, -n), t_final, 1,
                                      1 + n_traj, sample_dt);

        DickeLadder ladder(n);
        const auto L = build_liouvillian_pi(p, ladder);
        auto rho = BlockDensityMatrix::ground_state(ladder);
        const size_t n_samples = ens.front().times.size();
        double worst_pull = 0.0;
        for (size_t k = 1; k < n_samples; ++k) {
            double mean = 0.0, mean2 = 0.0;
            for (const auto& rec : ens) {
                mean += rec.sz[k];
                mean2 += rec.sz[k] * rec.sz[k];
            }
            mean /= n_traj;
            mean2 /= n_traj;
            const double sigma =
                std::sqrt(std::max(mean2 - mean * mean, 1e-12) / n_traj);
            rho = evolve(L, ladder, rho, ens.front().times[k] - ens.front().times[k - 1]);
            const double exact = rho.expectation(ladder, CollectiveOp::Sz).real();
            worst_pull = std::max(worst_pull, std::abs(mean - exact) / sigma);
        }
        check(worst_pull < 3.0, "ensemble <Sz(t)> pull vs master equation (max)",
              worst_pull, 0.0, 3.0);
    }

    // (b,c,d) N = 12 bistable run: switching rates, photon counts, jumps
    const int n = 12;
    DickeLadder ladder(n);
    ModelParams p(n, 10.0, 1.0, 0.0);
    p.omega = 0.73 * p.omega_c();
    const auto pair = decompose_for(p, ladder);
    const double szp = pair.rho_plus.expectation(ladder, CollectiveOp::Sz).real();
    const double szm = pair.rho_minus.expectation(ladder, CollectiveOp::Sz).real();
    const double low = szp + 0.25 * (szm - szp);
    const double high = szm - 0.25 * (szm - szp);
    std::printf("  branch sz: %.3f / %.3f; thresholds %.3f / %.3f\n", szp, szm, low, high);
    std::printf("  predicted rates: out of plus %.4f, out of minus %.4f\n",
                pair.gamma_plus, pair.gamma_minus);

    const double t_final = 150.0, sample_dt = 0.2;
    const auto rec = mcwf_run(p, dicke_state_full(n, -n), t_final, 20240817, sample_dt);
    const auto st = detect_switches(rec, low, high);
    std::printf("  transitions = %d, dwells = %zu/%zu, measured rates %.4f / %.4f\n",
                st.transitions, st.dwell_plus.size(), st.dwell_minus.size(), st.rate_plus,
                st.rate_minus);
    check_flag(st.sufficient, "enough completed dwells in both phases");
    check(st.rate_plus > 0.5 * pair.gamma_plus && st.rate_plus < 2.0 * pair.gamma_plus,
          "escape rate out of the plus phase within 2x of lambda1 a_minus", st.rate_plus,
          pair.gamma_plus, pair.gamma_plus);
    check(st.rate_minus > 0.5 * pair.gamma_minus && st.rate_minus < 2.0 * pair.gamma_minus,
          "escape rate out of the minus phase within 2x of lambda1 a_plus", st.rate_minus,
          pair.gamma_minus, pair.gamma_minus);

    // photon counts on stationary segments: compare detected totals inside
    // completed dwell windows against the rate integrals of the sampled
    // observables over the same windows, within 3 sqrt(expected) each.
    {
        // reconstruct per-phase sample masks with the same hysteresis walk
        std::vector<int> phase(rec.times.size(), 0);
        int current = 0;
        for (size_t k = 0; k < rec.times.size(); ++k) {
            if (rec.sz[k] < low)
                current = +1;
            else if (rec.sz[k] > high)
                current = -1;
            phase[k] = current;
        }
        for (int ph : {+1, -1}) {
            double expect_perp = 0.0, expect_par = 0.0, duration = 0.0;
            long got_perp = 0, got_par = 0;
            for (size_t k = 0; k + 1 < rec.times.size(); ++k) {
                if (phase[k] != ph || phase[k + 1] != ph)
                    continue;
                const double dt = rec.times[k + 1] - rec.times[k];
                duration += dt;
                expect_perp += p.gamma_s * (0.5 * n + 0.5 * (rec.sz[k] + rec.sz[k + 1])) * dt;
                expect_par +=
                    p.gamma_c * 0.5 * (rec.intensity[k] + rec.intensity[k + 1]) * dt;
                for (const auto& j : rec.jumps)
                    if (j.time >= rec.times[k] && j.time < rec.times[k + 1])
                        (j.collective() ? got_par : got_perp) += 1;
            }
            char label[72];
            std::snprintf(label, sizeof label,
                          "%s phase (%.0f time units): individual counts", ph > 0 ? "plus" : "minus",
                          duration);
            check(std::abs(got_perp - expect_perp) < 3.0 * std::sqrt(expect_perp), label,
                  got_perp, expect_perp, 3.0 * std::sqrt(expect_perp));
            std::snprintf(label, sizeof label,
                          "%s phase (%.0f time units): collective counts", ph > 0 ? "plus" : "minus",
                          duration);
            check(std::abs(got_par - expect_par) < 3.0 * std::sqrt(expect_par), label,
                  got_par, expect_par, 3.0 * std::sqrt(expect_par));
        }
    }

    // every plus -> minus window contains at least one individual jump
    bool all_windows_have_individual = !st.plus_to_minus_windows.empty();
    for (const auto& [lo_idx, hi_idx] : st.plus_to_minus_windows) {
        const double t0 = rec.times[lo_idx], t1 = rec.times[hi_idx];
        bool found = false;
        for (const auto& j : rec.jumps)
            if (!j.collective() && j.time >= t0 && j.time <= t1) {
                found = true;
                break;
            }
        if (!found)
            all_windows_have_individual = false;
    }
    check_flag(all_windows_have_individual,
               "every plus->minus window contains an individual jump");
}

// --------------------------------------------------------------- criterion 11
// Preparation protocols at N = 12: which metastable plateau is reached first.
namespace protocols {

constexpr double kNever = 1e300;

// Hysteresis walk over the sampled <Sz>: the plus phase is sz < low, the
// minus phase sz > high, and the phase persists in between. Returns the entry
// times of the first occupancy of each phase lasting at least hold time
// units, scanning from t_start.
std::pair<double, double> settle_times(const TrajectoryRecord& rec, double low,
                                       double high, double hold, double t_start) {
    double t_plus = kNever, t_minus = kNever;
    int phase = 0;
    double entered = 0.0;
    for (size_t k = 0; k < rec.times.size(); ++k) {
        if (rec.times[k] < t_start)
            continue;
        int here = phase;
        if (rec.sz[k] < low)
            here = +1;
        else if (rec.sz[k] > high)
            here = -1;
        if (here != phase) {
            phase = here;
            entered = rec.times[k];
        }
        if (phase != 0 && rec.times[k] - entered >= hold) {
            double& slot = phase > 0 ? t_plus : t_minus;
            if (slot == kNever)
                slot = entered;
        }
    }
    return {t_plus, t_minus};
}

} // namespace protocols

void criterion_11() {
    const int n = 12;
    DickeLadder ladder(n);
    ModelParams p(n, 10.0, 1.0, 0.0);
    p.omega = 0.73 * p.omega_c();
    const auto pair = decompose_for(p, ladder);
    const double szp = pair.rho_plus.expectation(ladder, CollectiveOp::Sz).real();
    const double szm = pair.rho_minus.expectation(ladder, CollectiveOp::Sz).real();
    const double low = szp + 0.25 * (szm - szp);
    const double high = szm - 0.25 * (szm - szp);
    const double t_final = 20.0, sample_dt = 0.1, hold = 1.5;
    std::printf("  thresholds: plus below %.3f, minus above %.3f\n", low, high);

    const auto fmt = [](double t) { return t >= protocols::kNever ? -1.0 : t; };
    const auto verdict = [&](const TrajectoryRecord& rec, bool expect_plus,
                             double t_start, const char* what) {
        const auto [tp, tm] = protocols::settle_times(rec, low, high, hold, t_start);
        std::printf("  %-34s settled plus %.2f, minus %.2f (-1 = never)\n", what, fmt(tp),
                    fmt(tm));
        check_flag(expect_plus ? tp < tm : tm < tp, what);
    };

    verdict(mcwf_run(p, dicke_state_full(n, -n), t_final, 11, sample_dt), true, 0.0,
            "ground start -> plus first");
    verdict(mcwf_run(p, prepare_singlet_product(n), t_final, 12, sample_dt), false, 0.0,
            "singlet start -> minus first");
    // The quench outcome depends on how much total angular momentum survives
    // the strong-drive segment, which fluctuates per trajectory at this N, so
    // the check is for the typical (majority) outcome over three seeds; each
    // run is judged from the moment the drive drops to the working value.
    const double t_quench = 5.0;
    const std::vector<std::pair<double, double>> schedule = {
        {0.0, 3.0 * p.omega_c()}, {t_quench, 0.73 * p.omega_c()}};
    int minus_first = 0;
    for (std::uint64_t seed : {21, 22, 23}) {
        const auto rec = quench_protocol(p, schedule, dicke_state_full(n, -n),
                                         t_quench + 10.0, seed, sample_dt);
        const auto [tp, tm] = protocols::settle_times(rec, low, high, hold, t_quench);
        std::printf("  quench seed %llu: settled plus %.2f, minus %.2f (-1 = never)\n",
                    static_cast<unsigned long long>(seed), fmt(tp), fmt(tm));
        if (tm < tp)
            ++minus_first;
    }
    check_flag(minus_first >= 2, "strong-drive quench -> minus first (2 of 3 seeds)");
}

} // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    for (int k = 1; k < argc; ++k)
        if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc)
            criterion = std::atoi(argv[k + 1]);
    if (criterion < 1 || criterion > 11) {
        std::fprintf(stderr, "usage: acceptance --criterion <1..11>\n");
        return 2;
    }
    switch (criterion) {
    case 1: criterion_1(); break;
    case 2: criterion_2(); break;
    case 3: criterion_3(); break;
    case 4: criterion_4(); break;
    case 5: criterion_5(); break;
    case 6: criterion_6(); break;
    case 7: criterion_7(); break;
    case 8: criterion_8(); break;
    case 9: criterion_9(); break;
    case 10: criterion_10(); break;
    case 11: criterion_11(); break;
    }
    std::printf("criterion %d: %s\n", criterion, g_failures == 0 ? "PASS" : "FAIL");
    return g_failures == 0 ? 0 : 1;
}
