#pragma once

#include "dickesim/params.hpp"

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace dickesim {

/// Per-atom Bloch components, s = 2<S>/N.
struct MeanFieldState {
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.0;

    double norm2() const { return sx * sx + sy * sy + sz * sz; }
};

enum class BranchLabel { Lower, Middle, Upper };
enum class Stability { Stable, Unstable, Marginal };

/// One steady-state root of the cubic, completed to a Bloch vector and
/// classified by the Jacobian spectrum. Lower = most negative s_z.
struct BranchSolution {
    BranchLabel label = BranchLabel::Lower;
    MeanFieldState state;
    Stability stability = Stability::Stable;
    std::array<std::complex<double>, 3> jacobian_eigenvalues{};
};

/// Right-hand side of the Bloch equations:
///   sx' = -g/2 sx + G/2 sz sx
///   sy' = -g/2 sy - 2 W sz + G/2 sz sy
///   sz' = -g (1 + sz) + 2 W sy - G/2 (sx^2 + sy^2)
MeanFieldState mf_rhs(const MeanFieldState& s, const MfParams& p);

/// Exact total-spin leakage rate d<S^2>/dt = -(gamma N^2/2)(sz^2+sz+(sx^2+sy^2)/2).
double mf_s2_leak_rate(const MeanFieldState& s, double gamma, int n_atoms);

/// Adaptive Dormand-Prince integration; returns (t, state) samples including
/// the endpoints, spaced at most sample_dt apart.
std::vector<std::pair<double, MeanFieldState>> mf_integrate(
    const MeanFieldState& initial, const MfParams& p, double t_final,
    double sample_dt, double tol = 1e-10);

/// Jacobian eigenvalues at a fixed point and the resulting classification.
Stability mf_stability(const MeanFieldState& s, const MfParams& p,
                       std::array<std::complex<double>, 3>* eigenvalues = nullptr);

/// All physical steady states: real roots of
///   (1 + sz)(gamma - sz Gamma)^2 + 8 sz Omega^2 = 0
/// in [-1, 0], each completed by sy = 4 Omega sz / (sz Gamma - gamma), sx = 0,
/// sorted by sz ascending and labeled Lower / Middle / Upper. For gamma = 0
/// (purely collective factorization) the unique on-sphere attractor is
/// returned instead; it requires Omega <= Omega_c.
std::vector<BranchSolution> mf_steady_states(const MfParams& p);

/// Closed-form bistability bounds in units of Omega_c:
///   (Omega/Omega_c)^2 = (1 + 20 g - 8 g^2 -+ sqrt((1 - 8 g)^3)) / 4,  g = gamma/Gamma.
/// Empty when Gamma < 8 gamma (no three-root region); at Gamma = 8 gamma the
/// window collapses to a point.
std::optional<std::pair<double, double>> bistability_window(const MfParams& p);

/// Perturbative branch values in powers of gamma (a = lower, b = middle,
/// c = upper in the Gamma >> gamma limit).
struct PerturbativeBranches {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int order = 0;
    bool c_small_omega_invalid = false; ///< the 1/(8 Omega^2) term dominates
};

/// Evaluate the gamma-expansion of s_z up to the given order (0, 1, or 2).
/// Branches a, b exist only for Omega < sqrt(2) Omega_c (domain error beyond).
PerturbativeBranches mf_perturbative(const MfParams& p, int order);

/// Dicke-model steady state (gamma_s = 0, collective factorization):
/// s = (0, r, -sqrt(1 - r^2)) for r = Omega/Omega_c in [0, 1].
MeanFieldState dicke_steady(double omega_ratio);

/// Transition-point estimate: per N, solve <Sz>(Omega) = (Sz^+ + Sz^-)/2 by
/// bisection over the bistability window, then extrapolate the exponential
/// convergence in N (Aitken delta-squared on the last three points).
struct PtEstimate {
    std::vector<int> n_values;
    std::vector<double> omega_pt_ratio; ///< Omega_PT / Omega_c per N
    double extrapolated_ratio = 0.0;
};

/// sz_provider(n, omega) must return the exact steady-state <Sz> (absolute,
/// not per-atom) at drive omega for n atoms.
PtEstimate estimate_pt_point(const std::vector<int>& n_values, double gamma_c, double gamma_s,
                             const std::function<double(int, double)>& sz_provider);

} // namespace dickesim
