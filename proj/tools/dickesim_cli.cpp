// Command-line driver for the dickesim core library.
//
// Usage:
//   dickesim --task steady --config cfg.json --out results/
//   dickesim --task trajectories --config cfg.json --seeds 0..16 --out results/
//   dickesim --task reproduce --figure fig2 --out results/fig2
//
// All rates in config files are interpreted in units of gamma_s (gamma_s = 1
// internally); when gamma_s = 0 the unit is gamma_c instead. Outputs are CSV
// for sweep scalars, JSONL for trajectories and JSON for density-matrix
// dumps; every run writes a manifest.json with the resolved configuration so
// reruns are byte-identical.

#include "dickesim/io.hpp"
#include "dickesim/meanfield.hpp"
#include "dickesim/observables.hpp"
#include "dickesim/pi_liouvillian.hpp"
#include "dickesim/squeezing.hpp"
#include "dickesim/trajectories.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dickesim;

namespace {

struct CliOptions {
    std::string config_path;
    std::string task;
    std::string out_dir = ".";
    std::string figure;
    std::uint64_t seed_begin = 0;
    std::uint64_t seed_end = 1;
    int max_fullspace_n = kFullSpaceStateCap;
    int threads = 1;
};

std::vector<double> omega_grid(const json& cfg) {
    const json& w = cfg.at("omega_ratio");
    if (w.is_number())
        return {w.get<double>()};
    if (w.is_array())
        return w.get<std::vector<double>>();
    const double a = w.at("start").get<double>();
    const double b = w.at("stop").get<double>();
    const int num = w.at("num").get<int>();
    std::vector<double> grid(num);
    for (int i = 0; i < num; ++i)
        grid[i] = num == 1 ? a : a + (b - a) * i / (num - 1);
    return grid;
}

std::vector<int> n_list(const json& cfg) {
    const json& n = cfg.at("n");
    if (n.is_number())
        return {n.get<int>()};
    return n.get<std::vector<int>>();
}

// Normalize rates so the smaller decay channel sets the unit.
json normalize_rates(json cfg) {
    double gc = cfg.value("gamma_c", 0.0);
    double gs = cfg.value("gamma_s", 1.0);
    const double unit = gs > 0.0 ? gs : gc;
    if (unit <= 0.0)
        throw std::domain_error("config: at least one of gamma_c, gamma_s must be positive");
    cfg["gamma_c"] = gc / unit;
    cfg["gamma_s"] = gs / unit;
    cfg["rate_unit"] = gs > 0.0 ? "gamma_s" : "gamma_c";
    return cfg;
}

ModelParams make_params(const json& cfg, int n, double omega_ratio) {
    ModelParams p(n, cfg.at("gamma_c").get<double>(), cfg.at("gamma_s").get<double>(), 0.0);
    p.omega = omega_ratio * p.omega_c();
    return p;
}

GapMethod parse_gap_method(const std::string& s) {
    if (s == "auto") return GapMethod::Auto;
    if (s == "dense") return GapMethod::DenseEig;
    if (s == "shift-invert") return GapMethod::ShiftInvert;
    if (s == "decay-fit") return GapMethod::DecayFit;
    throw std::invalid_argument("unknown gap method: " + s);
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os)
        throw std::runtime_error("cannot open output file: " + (dir / name).string());
    os.precision(15);
    return os;
}

void write_manifest(const fs::path& dir, const json& cfg, const CliOptions& opt) {
    std::ofstream os = open_out(dir, "manifest.json");
    os << run_manifest(cfg, opt.seed_begin, opt.seed_end).dump(2) << '\n';
}

void log_point_failure(const fs::path& dir, int n, double ratio, const std::exception& e) {
    std::ofstream os(dir / "errors.log", std::ios::app);
    os << "n=" << n << " omega_ratio=" << ratio << ": " << e.what() << '\n';
    std::cerr << "warning: skipping n=" << n << " omega_ratio=" << ratio << ": " << e.what()
              << '\n';
}

// ---------------------------------------------------------------------------

void run_steady(const json& cfg, const fs::path& dir) {
    const bool collective_only = cfg.at("gamma_s").get<double>() == 0.0;
    const bool dump = cfg.value("dump_states", false);
    for (int n : n_list(cfg)) {
        DickeLadder ladder(n, collective_only);
        std::ofstream os = open_out(dir, "steady_N" + std::to_string(n) + ".csv");
        os << observables_csv_header() << '\n';
        for (double ratio : omega_grid(cfg)) {
            try {
                const ModelParams p = make_params(cfg, n, ratio);
                const auto L = build_liouvillian_pi(p, ladder);
                const auto rho = steady_state_pi(L, ladder);
                CrssState crss;
                const CrssState* crss_ptr = nullptr;
                if (ratio < 1.0) {
                    crss = crss_state(n, Complex(0.0, -0.5 * n) * ratio);
                    crss_ptr = &crss;
                }
                os << observables_to_csv_row(ratio, observable_set(rho, ladder, crss_ptr))
                   << '\n';
                if (dump) {
                    std::ostringstream name;
                    name << "rho_N" << n << "_r" << ratio << ".json";
                    std::ofstream js = open_out(dir, name.str());
                    js << block_to_json(rho, ladder).dump() << '\n';
                }
            } catch (const std::exception& e) {
                log_point_failure(dir, n, ratio, e);
            }
        }
    }
}

void run_gap(const json& cfg, const fs::path& dir) {
    const GapMethod method = parse_gap_method(cfg.value("gap_method", "auto"));
    for (int n : n_list(cfg)) {
        DickeLadder ladder(n, cfg.at("gamma_s").get<double>() == 0.0);
        std::ofstream os = open_out(dir, "gap_N" + std::to_string(n) + ".csv");
        os << "omega_ratio,lambda1,lambda1_imag,fit_r_squared\n";
        for (double ratio : omega_grid(cfg)) {
            try {
                const auto L = build_liouvillian_pi(make_params(cfg, n, ratio), ladder);
                const auto steady = steady_state_pi(L, ladder);
                const auto gap = spectral_gap(L, ladder, method, &steady);
                os << ratio << ',' << gap.lambda1 << ',' << gap.lambda1_imag << ','
                   << gap.fit_r_squared << '\n';
            } catch (const std::exception& e) {
                log_point_failure(dir, n, ratio, e);
            }
        }
    }
}

void run_decompose(const json& cfg, const fs::path& dir) {
    const GapMethod method = parse_gap_method(cfg.value("gap_method", "auto"));
    const bool dump = cfg.value("dump_states", false);
    for (int n : n_list(cfg)) {
        DickeLadder ladder(n, cfg.at("gamma_s").get<double>() == 0.0);
        std::ofstream os = open_out(dir, "decompose_N" + std::to_string(n) + ".csv");
        os << "omega_ratio,lambda1,a_plus,a_minus,gamma_plus,gamma_minus,"
              "sz_plus,sz_minus,s2_plus,s2_minus,g2_plus,xi2_plus,crss_fidelity_plus\n";
        for (double ratio : omega_grid(cfg)) {
            try {
                const ModelParams p = make_params(cfg, n, ratio);
                const auto L = build_liouvillian_pi(p, ladder);
                const auto steady = steady_state_pi(L, ladder);
                const auto gap = spectral_gap(L, ladder, method, &steady);
                const auto pair = metastable_decomposition(ladder, steady, gap);

                CrssState crss;
                const CrssState* crss_ptr = nullptr;
                if (ratio < 1.0) {
                    crss = crss_state(n, Complex(0.0, -0.5 * n) * ratio);
                    crss_ptr = &crss;
                }
                const auto obs_p = observable_set(pair.rho_plus, ladder, crss_ptr);
                const auto obs_m = observable_set(pair.rho_minus, ladder);
                os << ratio << ',' << pair.lambda1 << ',' << pair.a_plus << ','
                   << pair.a_minus << ',' << pair.gamma_plus << ',' << pair.gamma_minus << ','
                   << obs_p.sz_mean << ',' << obs_m.sz_mean << ',' << obs_p.s2_mean << ','
                   << obs_m.s2_mean << ',' << obs_p.g2_zero << ',' << obs_p.xi_squared << ',';
                if (obs_p.crss_fidelity)
                    os << *obs_p.crss_fidelity;
                os << '\n';
                if (dump) {
                    std::ostringstream base;
                    base << "N" << n << "_r" << ratio;
                    std::ofstream jp = open_out(dir, "rho_plus_" + base.str() + ".json");
                    jp << block_to_json(pair.rho_plus, ladder).dump() << '\n';
                    std::ofstream jm = open_out(dir, "rho_minus_" + base.str() + ".json");
                    jm << block_to_json(pair.rho_minus, ladder).dump() << '\n';
                }
            } catch (const std::exception& e) {
                log_point_failure(dir, n, ratio, e);
            }
        }
    }
}

MfParams mf_from_config(const json& cfg, double ratio) {
    if (cfg.contains("Gamma_over_gamma")) {
        const double G = cfg.at("Gamma_over_gamma").get<double>();
        return {1.0, G, ratio * G / 4.0};
    }
    const int n = n_list(cfg).front();
    ModelParams p = make_params(cfg, n, ratio);
    return MfParams::from_model(p);
}

void run_meanfield(const json& cfg, const fs::path& dir) {
    std::ofstream os = open_out(dir, "meanfield.csv");
    os << "omega_ratio,sz_lower,stable_lower,sz_middle,sz_upper,stable_upper,"
          "pert2_a,pert2_b,pert2_c\n";
    std::optional<std::pair<double, double>> window;
    for (double ratio : omega_grid(cfg)) {
        const MfParams p = mf_from_config(cfg, ratio);
        if (!window)
            window = bistability_window(p);
        const auto branches = mf_steady_states(p);
        double szl = NAN, szm = NAN, szu = NAN;
        int stl = 0, stu = 0;
        for (const auto& b : branches) {
            const bool st = b.stability == Stability::Stable;
            if (b.label == BranchLabel::Lower) { szl = b.state.sz; stl = st; }
            if (b.label == BranchLabel::Middle) szm = b.state.sz;
            if (b.label == BranchLabel::Upper) { szu = b.state.sz; stu = st; }
        }
        double pa = NAN, pb = NAN, pc = NAN;
        try {
            const auto pert = mf_perturbative(p, 2);
            pa = pert.a;
            pb = pert.b;
            if (!pert.c_small_omega_invalid)
                pc = pert.c;
        } catch (const std::domain_error&) {
        }
        os << ratio << ',' << szl << ',' << stl << ',' << szm << ',' << szu << ',' << stu
           << ',' << pa << ',' << pb << ',' << pc << '\n';
    }
    std::ofstream js = open_out(dir, "meanfield_window.json");
    json jw;
    if (window)
        jw = {{"lower", window->first}, {"upper", window->second}};
    js << jw.dump(2) << '\n';
}

void run_squeezing(const json& cfg, const fs::path& dir) {
    std::ofstream os = open_out(dir, "squeezing.csv");
    os << "omega_ratio,xi2_analytic,linearization_suspect,theta,xi2_large_gamma\n";
    const int n = cfg.contains("n") ? n_list(cfg).front() : 0;
    for (double ratio : omega_grid(cfg)) {
        const MfParams p = mf_from_config(cfg, ratio);
        double xi2 = NAN, theta = NAN;
        int suspect = 0;
        try {
            const auto r = xi2_analytic(p, n);
            xi2 = r.xi2;
            theta = r.frame.theta;
            suspect = r.linearization_suspect;
        } catch (const std::exception&) {
        }
        double limit = NAN;
        if (ratio <= 1.0 / std::sqrt(2.0))
            limit = xi2_large_gamma_limit(ratio);
        os << ratio << ',' << xi2 << ',' << suspect << ',' << theta << ',' << limit << '\n';
    }
}

FullStateVector initial_state(const json& cfg, int n) {
    const std::string kind = cfg.value("initial", "ground");
    if (kind == "ground")
        return dicke_state_full(n, -n);
    if (kind == "excited")
        return dicke_state_full(n, n);
    if (kind == "singlet")
        return prepare_singlet_product(n);
    throw std::invalid_argument("unknown initial state: " + kind);
}

void run_trajectories(const json& cfg, const fs::path& dir, const CliOptions& opt,
                      const std::string& prefix = "traj") {
    const int n = n_list(cfg).front();
    if (n > opt.max_fullspace_n)
        throw std::domain_error("trajectories: n exceeds --max-fullspace-n");
    const double t_final = cfg.at("t_final").get<double>();
    const double sample_dt = cfg.value("sample_dt", t_final / 400.0);
    const FullStateVector initial = initial_state(cfg, n);

    std::vector<std::pair<double, double>> schedule;
    double final_ratio = omega_grid(cfg).front();
    if (cfg.contains("schedule")) {
        const ModelParams base = make_params(cfg, n, 0.0);
        for (const auto& entry : cfg.at("schedule"))
            schedule.emplace_back(entry[0].get<double>(),
                                  entry[1].get<double>() * base.omega_c());
        final_ratio = cfg.at("schedule").back()[1].get<double>();
    }

    FullStateVector crss;
    const FullStateVector* crss_ptr = nullptr;
    if (final_ratio < 1.0 && final_ratio > 0.0) {
        crss = crss_full(n, Complex(0.0, -0.5 * n) * final_ratio);
        crss_ptr = &crss;
    }

    const ModelParams p = make_params(cfg, n, final_ratio);
    if (!schedule.empty()) {
        for (std::uint64_t seed = opt.seed_begin; seed < opt.seed_end; ++seed) {
            const auto rec =
                quench_protocol(p, schedule, initial, t_final, seed, sample_dt, crss_ptr);
            std::ofstream os =
                open_out(dir, prefix + "_seed" + std::to_string(seed) + ".jsonl");
            write_trajectory_jsonl(os, rec);
        }
    } else {
        const auto records = run_ensemble(p, initial, t_final, opt.seed_begin, opt.seed_end,
                                          sample_dt, opt.threads, crss_ptr);
        for (const auto& rec : records) {
            std::ofstream os =
                open_out(dir, prefix + "_seed" + std::to_string(rec.seed) + ".jsonl");
            write_trajectory_jsonl(os, rec);
        }
    }
}

// Quick self-check: block steady states against the brute-force full-space
// solver at small N, plus the closed-form mixed-state limit.
int run_validate(const json& cfg, const fs::path& dir, const CliOptions& opt) {
    json report = json::array();
    bool ok = true;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(0.1, 1.0);

    const int n_max = std::min(5, std::min(opt.max_fullspace_n, kFullSpaceSuperopCap));
    for (int n = 2; n <= n_max; ++n) {
        DickeLadder ladder(n);
        const auto basis = angular_basis(n);
        for (int k = 0; k < 3; ++k) {
            const double gc = unif(rng), ratio = 3.0 * unif(rng);
            ModelParams p(n, gc, 1.0, 0.0);
            p.omega = ratio * std::max(p.omega_c(), 0.25);
            const auto rho_pi = steady_state_pi(build_liouvillian_pi(p, ladder), ladder);
            const auto rho_full =
                block_from_full(steady_state_full(build_liouvillian_full(p)), ladder, basis);
            double diff = 0.0;
            for (int b = 0; b < ladder.n_blocks(); ++b)
                diff = std::max(diff,
                                (rho_pi.block(b) - rho_full.block(b)).cwiseAbs().maxCoeff());
            const bool pass = diff < 1e-9;
            ok = ok && pass;
            report.push_back({{"n", n},
                              {"gamma_c", gc},
                              {"omega", p.omega},
                              {"max_diff", diff},
                              {"pass", pass}});
            std::cout << (pass ? "PASS" : "FAIL") << " steady-state agreement N=" << n
                      << " max|diff|=" << diff << '\n';
        }
    }

    // strong-drive limit approaches the totally mixed state
    {
        const int n = 6;
        DickeLadder ladder(n);
        ModelParams p(n, 1.0, 1.0, 200.0);
        const auto rho = steady_state_pi(build_liouvillian_pi(p, ladder), ladder);
        const auto obs = observable_set(rho, ladder);
        const auto ref = mixed_state_reference(n);
        const bool pass = std::abs(obs.intensity - ref.intensity) < 0.05 * ref.intensity &&
                          std::abs(obs.g2_zero - ref.g2_zero) < 0.05 * ref.g2_zero;
        ok = ok && pass;
        report.push_back({{"check", "strong_drive_mixed_limit"}, {"pass", pass}});
        std::cout << (pass ? "PASS" : "FAIL") << " strong-drive mixed-state limit\n";
    }

    std::ofstream os = open_out(dir, "validation_report.json");
    os << json{{"ok", ok}, {"checks", report}}.dump(2) << '\n';
    (void)cfg;
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Canned figure configurations. These emit the data behind each paper-style
// plot as CSV/JSONL plus a README describing the axes; nothing is rendered.

void write_readme(const fs::path& dir, const std::string& text) {
    std::ofstream os = open_out(dir, "README.txt");
    os << text;
}

void run_fig7(const fs::path& dir) {
    // Mean-field relaxation traces from a fan of initial conditions.
    const MfParams p{1.0, 15.0, 0.5 * 15.0 / 4.0};
    std::ofstream os = open_out(dir, "fig7.csv");
    os << "t,sz_from_up,sz_from_down,sz_from_side\n";
    const std::vector<MeanFieldState> inits = {
        {0.0, 0.0, -0.05}, {0.0, 0.0, -0.95}, {0.7, 0.0, -0.5}};
    std::vector<std::vector<std::pair<double, MeanFieldState>>> runs;
    for (const auto& ic : inits)
        runs.push_back(mf_integrate(ic, p, 20.0, 0.05));
    for (size_t k = 0; k < runs[0].size(); ++k) {
        os << runs[0][k].first;
        for (const auto& run : runs)
            os << ',' << (k < run.size() ? run[k].second.sz : NAN);
        os << '\n';
    }
}

void run_fig10(const fs::path& dir, const json& cfg) {
    const double gc = cfg.at("gamma_c").get<double>();
    const double gs = cfg.at("gamma_s").get<double>();
    const auto est = estimate_pt_point(
        n_list(cfg), gc, gs, [&](int n, double omega) {
            DickeLadder ladder(n);
            ModelParams p(n, gc, gs, omega);
            const auto rho = steady_state_pi(build_liouvillian_pi(p, ladder), ladder);
            return rho.expectation(ladder, CollectiveOp::Sz).real();
        });
    std::ofstream os = open_out(dir, "fig10.csv");
    os << "n,omega_pt_ratio\n";
    for (size_t k = 0; k < est.n_values.size(); ++k)
        os << est.n_values[k] << ',' << est.omega_pt_ratio[k] << '\n';
    std::ofstream js = open_out(dir, "pt_extrapolation.json");
    js << json{{"extrapolated_ratio", est.extrapolated_ratio}}.dump(2) << '\n';
}

void run_fig11(const fs::path& dir, const json& cfg, const CliOptions& opt) {
    const int n = n_list(cfg).front();
    const double ratio = omega_grid(cfg).front();
    const ModelParams p = make_params(cfg, n, ratio);
    const auto rec = mcwf_run(p, dicke_state_full(n, -n), cfg.at("t_final").get<double>(),
                              opt.seed_begin, cfg.value("sample_dt", 0.1));
    const double bin = cfg.value("bin_width", 0.5);
    const auto perp = photon_counts(rec, bin, DetectorPort::Perpendicular);
    const auto par = photon_counts(rec, bin, DetectorPort::Parallel);
    std::ofstream os = open_out(dir, "fig11.csv");
    os << "bin_start,count_perpendicular,count_parallel\n";
    for (size_t k = 0; k < perp.size(); ++k)
        os << k * bin << ',' << perp[k] << ',' << (k < par.size() ? par[k] : 0) << '\n';
}

int run_reproduce(const std::string& figure, const fs::path& dir, CliOptions opt) {
    json cfg;
    if (figure == "fig1b") {
        cfg = {{"Gamma_over_gamma", 15.0},
               {"omega_ratio", {{"start", 0.01}, {"stop", 1.2}, {"num", 120}}}};
        run_meanfield(cfg, dir);
        write_readme(dir,
                     "fig1b: mean-field bistability at Gamma/gamma = 15.\n"
                     "meanfield.csv: x = Omega/Omega_c, y = s_z on each branch\n"
                     "(stable_* flags mark dynamically stable roots); pert2_* are the\n"
                     "second-order small-gamma expansions. meanfield_window.json holds\n"
                     "the closed-form bistability bounds.\n");
    } else if (figure == "fig2") {
        cfg = normalize_rates({{"n", {18}},
                               {"gamma_c", 10.0},
                               {"gamma_s", 1.0},
                               {"omega_ratio", {{"start", 0.05}, {"stop", 1.2}, {"num", 47}}}});
        run_steady(cfg, dir);
        write_readme(dir,
                     "fig2: steady-state observables across the transition, N = 18,\n"
                     "gamma_c = 10 gamma_s. steady_N18.csv: x = Omega/Omega_c,\n"
                     "y = intensity <S+S->, g2_zero, s2_mean <S^2>, sz_mean.\n");
    } else if (figure == "fig3") {
        cfg = normalize_rates({{"n", {6, 8, 10, 12, 14, 16, 18}},
                               {"gamma_c", 10.0},
                               {"gamma_s", 1.0},
                               {"omega_ratio", 0.61}});
        run_gap(cfg, dir);
        write_readme(dir,
                     "fig3: Liouvillian gap at Omega = 0.61 Omega_c vs system size.\n"
                     "gap_N*.csv: lambda1 (in units of gamma_s) per N; plot\n"
                     "log(lambda1) against N to see the exponential closing.\n");
    } else if (figure == "fig4") {
        cfg = normalize_rates({{"n", {18}},
                               {"gamma_c", 10.0},
                               {"gamma_s", 1.0},
                               {"gap_method", "shift-invert"},
                               {"omega_ratio", {{"start", 0.3}, {"stop", 0.9}, {"num", 25}}}});
        run_decompose(cfg, dir);
        write_readme(dir,
                     "fig4: metastable decomposition, N = 18, gamma_c = 10 gamma_s.\n"
                     "decompose_N18.csv: x = Omega/Omega_c, y = sz_plus/sz_minus\n"
                     "(branch magnetizations), a_plus/a_minus (steady-state weights),\n"
                     "gamma_plus/gamma_minus (escape rates), lambda1 (gap).\n");
    } else if (figure == "fig5") {
        cfg = normalize_rates({{"n", 12},
                               {"gamma_c", 10.0},
                               {"gamma_s", 1.0},
                               {"omega_ratio", 0.73},
                               {"t_final", 40.0},
                               {"sample_dt", 0.05},
                               {"initial", "ground"}});
        if (opt.seed_end <= opt.seed_begin + 1)
            opt.seed_end = opt.seed_begin + 2;
        run_trajectories(cfg, dir, opt);
        write_readme(dir,
                     "fig5: quantum-trajectory switching, N = 12, Omega = 0.73 Omega_c.\n"
                     "traj_seed*.jsonl: sample lines carry t, sz, s2, intensity and the\n"
                     "CRSS fidelity; jump lines carry the emission channel (-1 =\n"
                     "collective port, 0..N-1 = individual ports). Plot sz and\n"
                     "crss_fidelity against t to see the telegraph.\n");
    } else if (figure == "fig6") {
        json base = normalize_rates({{"n", 12},
                                     {"gamma_c", 10.0},
                                     {"gamma_s", 1.0},
                                     {"omega_ratio", 0.73},
                                     {"t_final", 30.0},
                                     {"sample_dt", 0.05}});
        json singlet = base;
        singlet["initial"] = "singlet";
        run_trajectories(singlet, dir, opt, "singlet");
        json quench = base;
        quench["initial"] = "ground";
        quench["schedule"] = {{0.0, 3.0}, {5.0, 0.73}};
        run_trajectories(quench, dir, opt, "quench");
        cfg = {{"singlet", singlet}, {"quench", quench}};
        write_readme(dir,
                     "fig6: state-preparation protocols that select the uncorrelated\n"
                     "branch first. singlet_seed*.jsonl starts from a product of\n"
                     "nearest-neighbor singlets (<S^2> = 0); quench_seed*.jsonl drives\n"
                     "hard (Omega = 3 Omega_c) until t = 5 and then quenches to\n"
                     "0.73 Omega_c. Same line format as fig5.\n");
    } else if (figure == "fig7") {
        run_fig7(dir);
        cfg = {{"Gamma_over_gamma", 15.0}, {"omega_ratio", 0.5}};
        write_readme(dir,
                     "fig7: mean-field relaxation at Gamma/gamma = 15,\n"
                     "Omega = 0.5 Omega_c. fig7.csv: x = t (units 1/gamma), y = s_z(t)\n"
                     "from three initial conditions; the fan splits between the two\n"
                     "stable branches.\n");
    } else if (figure == "fig9") {
        cfg = {{"Gamma_over_gamma", 1e4},
               {"omega_ratio", {{"start", 0.0}, {"stop", 0.7071}, {"num", 72}}}};
        run_squeezing(cfg, dir);
        write_readme(dir,
                     "fig9: spin squeezing of the lower branch in the Holstein-\n"
                     "Primakoff linearization. squeezing.csv: x = Omega/Omega_c,\n"
                     "y = xi2_analytic (Gamma/gamma = 1e4) and xi2_large_gamma (the\n"
                     "closed-form limit); the two coincide, reaching 1/sqrt(3) at\n"
                     "Omega = Omega_c/sqrt(2).\n");
    } else if (figure == "fig10") {
        cfg = normalize_rates({{"n", {18, 20, 22, 24, 26, 28, 30, 32}},
                               {"gamma_c", 10.0},
                               {"gamma_s", 1.0}});
        run_fig10(dir, cfg);
        write_readme(dir,
                     "fig10: finite-size transition point. fig10.csv: x = N,\n"
                     "y = Omega_PT/Omega_c where <Sz> crosses the branch midpoint;\n"
                     "pt_extrapolation.json holds the Aitken-extrapolated\n"
                     "large-N value.\n");
    } else if (figure == "fig11") {
        cfg = normalize_rates({{"n", 12},
                               {"gamma_c", 10.0},
                               {"gamma_s", 1.0},
                               {"omega_ratio", 0.73},
                               {"t_final", 40.0},
                               {"sample_dt", 0.1},
                               {"bin_width", 0.5}});
        run_fig11(dir, cfg, opt);
        write_readme(dir,
                     "fig11: binned photon counts along one switching trajectory,\n"
                     "N = 12, Omega = 0.73 Omega_c. fig11.csv: x = bin start time,\n"
                     "y = counts in the perpendicular (individual-emission) and\n"
                     "parallel (collective-emission) detector ports.\n");
    } else {
        std::cerr << "unknown figure id: " << figure << '\n';
        return 2;
    }
    cfg["figure"] = figure;
    write_manifest(dir, cfg, opt);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CliOptions opt;
    std::string seeds_spec;

    CLI::App app{"dickesim: driven spin ensembles with collective and individual decay"};
    app.add_option("--config", opt.config_path, "JSON configuration file");
    app.add_option("--task", opt.task,
                   "steady|gap|decompose|meanfield|squeezing|trajectories|validate|reproduce")
        ->required();
    app.add_option("--out", opt.out_dir, "output directory (created if absent)");
    app.add_option("--seeds", seeds_spec, "seed range a..b (b exclusive)");
    app.add_option("--figure", opt.figure, "figure id for --task reproduce");
    app.add_option("--max-fullspace-n", opt.max_fullspace_n,
                   "largest N allowed in full-space trajectory work");
    app.add_option("--threads", opt.threads, "worker threads for trajectory ensembles");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!seeds_spec.empty()) {
            const auto dots = seeds_spec.find("..");
            if (dots == std::string::npos)
                throw std::invalid_argument("--seeds expects the form a..b");
            opt.seed_begin = std::stoull(seeds_spec.substr(0, dots));
            opt.seed_end = std::stoull(seeds_spec.substr(dots + 2));
            if (opt.seed_end <= opt.seed_begin)
                throw std::invalid_argument("--seeds range is empty");
        }

        const fs::path dir(opt.out_dir);
        fs::create_directories(dir);

        if (opt.task == "reproduce") {
            if (opt.figure.empty())
                throw std::invalid_argument("--task reproduce needs --figure");
            return run_reproduce(opt.figure, dir, opt);
        }

        json cfg = json::object();
        if (!opt.config_path.empty()) {
            std::ifstream is(opt.config_path);
            if (!is)
                throw std::runtime_error("cannot read config file: " + opt.config_path);
            is >> cfg;
        }
        cfg = normalize_rates(std::move(cfg));

        if (opt.task == "steady")
            run_steady(cfg, dir);
        else if (opt.task == "gap")
            run_gap(cfg, dir);
        else if (opt.task == "decompose")
            run_decompose(cfg, dir);
        else if (opt.task == "meanfield")
            run_meanfield(cfg, dir);
        else if (opt.task == "squeezing")
            run_squeezing(cfg, dir);
        else if (opt.task == "trajectories")
            run_trajectories(cfg, dir, opt);
        else if (opt.task == "validate")
            return run_validate(cfg, dir, opt);
        else
            throw std::invalid_argument("unknown task: " + opt.task);

        write_manifest(dir, cfg, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
