#include "dickesim/squeezing.hpp"

#include <cmath>
#include <stdexcept>

namespace dickesim {

HpFrame hp_frame(const MeanFieldState& lower_branch, int n_atoms) {
    HpFrame f;
    f.s_norm = std::sqrt(lower_branch.sz * lower_branch.sz +
                         lower_branch.sy * lower_branch.sy);
    if (f.s_norm < 1e-14)
        throw std::domain_error("hp_frame: vanishing mean spin");
    f.theta = std::acos(lower_branch.sz / f.s_norm);
    f.j_mf = 0.5 * n_atoms * f.s_norm;
    return f;
}

HpCorrelators hp_correlators(const MfParams& p, const MeanFieldState& lower_branch) {
    const HpFrame f = hp_frame(lower_branch);
    const double c = std::cos(f.theta);
    const double s2 = 1.0 - c * c; // sin^2(theta)
    const double base = -p.Gamma * f.s_norm * c;
    const double d1 = base + p.gamma * (1.0 + s2);
    const double d2 = base + p.gamma * (1.0 + 0.5 * s2);
    const double d3 = base + p.gamma;
    if (d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0)
        throw std::runtime_error(
            "hp_correlators: fluctuation instability (non-positive denominator); "
            "the linearized theory does not apply here");
    const double pref = 0.25 * (p.gamma + p.Gamma) * f.s_norm;
    HpCorrelators out;
    out.n_a = pref * (1.0 / d1 + 2.0 * c / d2 + c * c / d3);
    out.sq_a = pref * (c * c / d3 - 1.0 / d1);
    return out;
}

Xi2Result xi2_analytic(const MfParams& p, int n_atoms) {
    MeanFieldState lower;
    bool found = false;
    for (const auto& sol : mf_steady_states(p))
        if (sol.label == BranchLabel::Lower && sol.stability != Stability::Unstable) {
            lower = sol.state;
            found = true;
        }
    if (!found)
        throw std::runtime_error("xi2_analytic: no stable lower branch at these parameters");

    const HpCorrelators corr = hp_correlators(p, lower);
    Xi2Result out;
    out.frame = hp_frame(lower, n_atoms);
    out.xi2 = 1.0 + 2.0 * (corr.n_a - std::abs(corr.sq_a));

    const double c = std::cos(out.frame.theta);
    const double margin = -p.Gamma * out.frame.s_norm * c + p.gamma;
    out.linearization_suspect =
        margin < 0.2 * p.gamma || (n_atoms > 0 && out.frame.j_mf < 5.0);
    return out;
}

double xi2_large_gamma_limit(double omega_ratio) {
    if (omega_ratio < 0.0 || omega_ratio > 1.0 / std::sqrt(2.0) + 1e-12)
        throw std::domain_error("xi2_large_gamma_limit: ratio must lie in [0, 1/sqrt(2)]");
    const double r2 = omega_ratio * omega_ratio;
    const double root = std::sqrt(std::max(0.0, 1.0 - 2.0 * r2));
    return (1.0 + root) / (std::sqrt(2.0) * std::sqrt(1.0 + r2 + root));
}

} // namespace dickesim
