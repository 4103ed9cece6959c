#include "dickesim/meanfield.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dickesim {

MeanFieldState mf_rhs(const MeanFieldState& s, const MfParams& p) {
    MeanFieldState d;
    d.sx = -0.5 * p.gamma * s.sx + 0.5 * p.Gamma * s.sz * s.sx;
    d.sy = -0.5 * p.gamma * s.sy - 2.0 * p.omega * s.sz + 0.5 * p.Gamma * s.sz * s.sy;
    d.sz = -p.gamma * (1.0 + s.sz) + 2.0 * p.omega * s.sy -
           0.5 * p.Gamma * (s.sx * s.sx + s.sy * s.sy);
    return d;
}

double mf_s2_leak_rate(const MeanFieldState& s, double gamma, int n_atoms) {
    const double n2 = double(n_atoms) * n_atoms;
    return -0.5 * gamma * n2 *
           (s.sz * s.sz + s.sz + 0.5 * (s.sx * s.sx + s.sy * s.sy));
}

std::vector<std::pair<double, MeanFieldState>> mf_integrate(
    const MeanFieldState& initial, const MfParams& p, double t_final,
    double sample_dt, double tol) {
    if (t_final < 0 || sample_dt <= 0)
        throw std::domain_error("mf_integrate: need t_final >= 0 and sample_dt > 0");

    // Dormand-Prince 5(4) coefficients
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [](const MeanFieldState& s, std::initializer_list<std::pair<double, const MeanFieldState*>> terms,
                   double h) {
        MeanFieldState out = s;
        for (const auto& [c, k] : terms) {
            out.sx += h * c * k->sx;
            out.sy += h * c * k->sy;
            out.sz += h * c * k->sz;
        }
        return out;
    };

    std::vector<std::pair<double, MeanFieldState>> samples;
    samples.emplace_back(0.0, initial);
    MeanFieldState s = initial;
    double t = 0.0;
    double next_sample = sample_dt;
    const double scale = std::max({p.gamma, p.Gamma, p.omega, 1e-12});
    double h = std::min(0.01 / scale, t_final > 0 ? t_final : 1.0);

    MeanFieldState k1 = mf_rhs(s, p);
    while (t < t_final) {
        h = std::min(h, t_final - t);
        h = std::min(h, next_sample - t); // land exactly on sample times
        const MeanFieldState k2 = mf_rhs(axpy(s, {{a21, &k1}}, h), p);
        const MeanFieldState k3 = mf_rhs(axpy(s, {{a31, &k1}, {a32, &k2}}, h), p);
        const MeanFieldState k4 = mf_rhs(axpy(s, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h), p);
        const MeanFieldState k5 =
            mf_rhs(axpy(s, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h), p);
        const MeanFieldState k6 = mf_rhs(
            axpy(s, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h), p);
        const MeanFieldState snew =
            axpy(s, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
        const MeanFieldState k7 = mf_rhs(snew, p);
        const MeanFieldState errv = axpy(
            MeanFieldState{}, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}},
            h);
        const double err =
            std::sqrt(errv.sx * errv.sx + errv.sy * errv.sy + errv.sz * errv.sz) /
            std::max(tol, 1e-300);
        if (err <= 1.0) {
            t += h;
            s = snew;
            k1 = k7; // FSAL
            if (t >= next_sample - 1e-14 * std::max(1.0, t)) {
                samples.emplace_back(t, s);
                next_sample += sample_dt;
            }
        }
        const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    if (samples.back().first < t_final)
        samples.emplace_back(t_final, s);
    return samples;
}

Stability mf_stability(const MeanFieldState& s, const MfParams& p,
                       std::array<std::complex<double>, 3>* eigenvalues) {
    Eigen::Matrix3d jac;
    jac << -0.5 * p.gamma + 0.5 * p.Gamma * s.sz, 0.0, 0.5 * p.Gamma * s.sx,
        0.0, -0.5 * p.gamma + 0.5 * p.Gamma * s.sz, -2.0 * p.omega + 0.5 * p.Gamma * s.sy,
        -p.Gamma * s.sx, 2.0 * p.omega - p.Gamma * s.sy, -p.gamma;
    const Eigen::EigenSolver<Eigen::Matrix3d> eig(jac);
    double max_re = -1e300;
    for (int k = 0; k < 3; ++k) {
        if (eigenvalues)
            (*eigenvalues)[k] = eig.eigenvalues()[k];
        max_re = std::max(max_re, eig.eigenvalues()[k].real());
    }
    if (std::abs(max_re) < 1e-10)
        return Stability::Marginal;
    return max_re < 0 ? Stability::Stable : Stability::Unstable;
}

std::vector<BranchSolution> mf_steady_states(const MfParams& p) {
    std::vector<BranchSolution> out;
    if (p.gamma == 0.0) {
        const double wc = p.omega_c();
        if (wc <= 0.0)
            throw std::domain_error("mf_steady_states: Gamma must be positive when gamma = 0");
        BranchSolution sol;
        sol.state = dicke_steady(p.omega / wc);
        sol.label = BranchLabel::Lower;
        sol.stability = mf_stability(sol.state, p, &sol.jacobian_eigenvalues);
        out.push_back(sol);
        return out;
    }

    // (1+z)(g - z G)^2 + 8 z W^2 = G^2 z^3 + (G^2 - 2 g G) z^2
    //                             + (g^2 - 2 g G + 8 W^2) z + g^2
    const double g = p.gamma, G = p.Gamma, W = p.omega;
    std::vector<std::complex<double>> roots;
    if (G == 0.0) {
        // linear: g^2 (1 + z) + 8 z W^2 = 0
        roots.emplace_back(-g * g / (g * g + 8.0 * W * W), 0.0);
    } else {
        Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
        const double c2 = (G * G - 2 * g * G) / (G * G);
        const double c1 = (g * g - 2 * g * G + 8 * W * W) / (G * G);
        const double c0 = g * g / (G * G);
        companion(0, 2) = -c0;
        companion(1, 2) = -c1;
        companion(2, 2) = -c2;
        companion(1, 0) = 1.0;
        companion(2, 1) = 1.0;
        const Eigen::EigenSolver<Eigen::Matrix3d> eig(companion);
        for (int k = 0; k < 3; ++k)
            roots.push_back(eig.eigenvalues()[k]);
    }

    auto cubic = [&](double z) { return (1 + z) * (g - z * G) * (g - z * G) + 8 * z * W * W; };
    auto dcubic = [&](double z) {
        return (g - z * G) * (g - z * G) - 2 * G * (1 + z) * (g - z * G) + 8 * W * W;
    };

    std::vector<double> real_roots;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) > 1e-7 * std::max(1.0, std::abs(r)))
            continue;
        double z = r.real();
        const double d = dcubic(z);
        if (d != 0.0)
            z -= cubic(z) / d; // one Newton polish
        if (z < -1.0 - 1e-9 || z > 1e-9)
            continue;
        z = std::clamp(z, -1.0, 0.0);
        // dedupe (double roots at the window edges)
        bool dup = false;
        for (double zr : real_roots)
            if (std::abs(zr - z) < 1e-9)
                dup = true;
        if (!dup)
            real_roots.push_back(z);
    }
    std::sort(real_roots.begin(), real_roots.end());

    for (size_t k = 0; k < real_roots.size(); ++k) {
        BranchSolution sol;
        const double z = real_roots[k];
        sol.state.sx = 0.0;
        sol.state.sz = z;
        const double denom = z * G - g;
        if (std::abs(denom) < 1e-14 * std::max(g, G))
            sol.state.sy = 0.0; // only reachable with omega ~ 0
        else
            sol.state.sy = 4.0 * W * z / denom;
        sol.label = real_roots.size() == 3
                        ? std::array<BranchLabel, 3>{BranchLabel::Lower, BranchLabel::Middle,
                                                     BranchLabel::Upper}[k]
                        : (real_roots.size() == 2
                               ? (k == 0 ? BranchLabel::Lower : BranchLabel::Upper)
                               : BranchLabel::Lower);
        sol.stability = mf_stability(sol.state, p, &sol.jacobian_eigenvalues);
        out.push_back(sol);
    }
    return out;
}

std::optional<std::pair<double, double>> bistability_window(const MfParams& p) {
    if (p.Gamma <= 0.0)
        return std::nullopt;
    const double g = p.gamma / p.Gamma;
    if (g > 0.125)
        return std::nullopt;
    const double disc = std::sqrt(std::pow(1.0 - 8.0 * g, 3.0));
    const double base = 1.0 + 20.0 * g - 8.0 * g * g;
    const double lo = 0.5 * std::sqrt(std::max(base - disc, 0.0));
    const double hi = 0.5 * std::sqrt(base + disc);
    return std::make_pair(lo, hi);
}

PerturbativeBranches mf_perturbative(const MfParams& p, int order) {
    if (order < 0 || order > 2)
        throw std::domain_error("mf_perturbative: order must be 0, 1, or 2");
    if (p.Gamma <= 0.0)
        throw std::domain_error("mf_perturbative: Gamma must be positive");
    const double wc = p.omega_c();
    const double r2 = (p.omega / wc) * (p.omega / wc);
    if (r2 >= 2.0)
        throw std::domain_error(
            "mf_perturbative: branches a, b require Omega < sqrt(2) Omega_c");

    const double root = std::sqrt(1.0 - 2.0 * r2);
    PerturbativeBranches out;
    out.order = order;
    out.a = -0.5 - 0.5 * root;
    out.b = -0.5 + 0.5 * root;
    out.c = 0.0;

    if (order >= 1 && root > 0.0) {
        const double pref = p.Gamma / (16.0 * wc * wc);
        out.a += p.gamma * pref * (1.0 - 1.0 / root);
        out.b += p.gamma * pref * (1.0 + 1.0 / root);
    }
    if (order >= 2) {
        const double W2 = p.omega * p.omega;
        const double wc2 = wc * wc;
        const double S = wc * root; // sqrt(Omega_c^2 - 2 Omega^2)
        const double G2 = p.Gamma * p.Gamma;
        const double common = 128.0 * wc2 * wc * (wc2 - 2.0 * W2);
        if (common != 0.0) {
            const double num_a = (S - wc) * (G2 * (wc * (S + wc) - W2) + 16.0 * W2 * wc2 -
                                             8.0 * wc2 * wc2);
            const double den_a = wc * (S + wc) - 2.0 * W2;
            // overall sign fixed so the order-2 residual against the exact
            // cubic root scales as (gamma/Gamma)^3
            out.a -= p.gamma * p.gamma * (num_a / den_a) / common;
            const double num_b = (S + wc) * (G2 * (wc * (-S + wc) - W2) + 16.0 * W2 * wc2 -
                                             8.0 * wc2 * wc2);
            const double den_b = wc * (-S + wc) - 2.0 * W2;
            out.b += p.gamma * p.gamma * (num_b / den_b) / common;
        }
        if (p.omega > 0.0) {
            const double corr = -1.0 / (8.0 * W2);
            out.c += p.gamma * p.gamma * corr;
            out.c_small_omega_invalid = std::abs(p.gamma * p.gamma * corr) > 0.05;
        } else {
            out.c_small_omega_invalid = true;
        }
    }
    return out;
}

MeanFieldState dicke_steady(double omega_ratio) {
    if (omega_ratio < 0.0 || omega_ratio > 1.0)
        throw std::domain_error("dicke_steady: Omega/Omega_c must lie in [0, 1]");
    MeanFieldState s;
    s.sx = 0.0;
    s.sy = omega_ratio;
    s.sz = -std::sqrt(1.0 - omega_ratio * omega_ratio);
    return s;
}

PtEstimate estimate_pt_point(const std::vector<int>& n_values, double gamma_c, double gamma_s,
                             const std::function<double(int, double)>& sz_provider) {
    PtEstimate out;
    for (int n : n_values) {
        const ModelParams mp(n, gamma_c, gamma_s, 0.0);
        MfParams p = MfParams::from_model(mp);
        const double wc = p.omega_c();
        const auto window = bistability_window(p);
        if (!window)
            throw std::runtime_error("estimate_pt_point: no bistability window at N = " +
                                     std::to_string(n));

        auto target = [&](double ratio) {
            p.omega = ratio * wc;
            double lower = 0.0, upper = 0.0;
            bool have_lower = false, have_upper = false;
            for (const auto& sol : mf_steady_states(p)) {
                if (sol.stability == Stability::Unstable)
                    continue;
                if (sol.label == BranchLabel::Lower) {
                    lower = sol.state.sz;
                    have_lower = true;
                } else {
                    upper = sol.state.sz;
                    have_upper = true;
                }
            }
            if (!have_lower || !have_upper)
                throw std::runtime_error(
                    "estimate_pt_point: missing a stable branch inside the window");
            const double mf_mid = 0.25 * n * (lower + upper); // (Sz^+ + Sz^-)/2
            return sz_provider(n, ratio * wc) - mf_mid;
        };

        const double eps = 1e-4;
        double lo = window->first + eps, hi = window->second - eps;
        double flo = target(lo), fhi = target(hi);
        if (flo * fhi > 0)
            throw std::runtime_error(
                "estimate_pt_point: no sign change across the bistability window at N = " +
                std::to_string(n));
        for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = target(mid);
            if (flo * fmid <= 0) {
                hi = mid;
                fhi = fmid;
            } else {
                lo = mid;
                flo = fmid;
            }
        }
        out.n_values.push_back(n);
        out.omega_pt_ratio.push_back(0.5 * (lo + hi));
    }

    const auto& x = out.omega_pt_ratio;
    if (x.size() >= 3) {
        // Aitken delta-squared on the last three points (exponential convergence)
        const double x0 = x[x.size() - 3], x1 = x[x.size() - 2], x2 = x[x.size() - 1];
        const double d2 = x2 - 2 * x1 + x0;
        out.extrapolated_ratio =
            std::abs(d2) > 1e-14 ? x2 - (x2 - x1) * (x2 - x1) / d2 : x2;
    } else if (!x.empty()) {
        out.extrapolated_ratio = x.back();
    }
    return out;
}

} // namespace dickesim
