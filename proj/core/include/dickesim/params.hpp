#pragma once

#include <stdexcept>

namespace dickesim {

/// Physical parameters of the driven spin ensemble with collective decay
/// at rate gamma_c and individual decay at rate gamma_s.
///
/// Derived mean-field constants are recomputed on access so they can never
/// go stale:
///   gamma   = gamma_s + gamma_c
///   Gamma   = (N - 1) * gamma_c
///   omega_c = Gamma / 4
struct ModelParams {
    int n_atoms = 1;
    double gamma_c = 0.0;
    double gamma_s = 1.0;
    double omega = 0.0;

    ModelParams() = default;
    ModelParams(int n, double gc, double gs, double om)
        : n_atoms(n), gamma_c(gc), gamma_s(gs), omega(om) {
        validate();
    }

    void validate() const {
        if (n_atoms < 1)
            throw std::domain_error("ModelParams: n_atoms must be >= 1");
        if (gamma_c < 0 || gamma_s < 0 || omega < 0)
            throw std::domain_error("ModelParams: rates and drive must be >= 0");
    }

    double gamma() const { return gamma_s + gamma_c; }
    double Gamma() const { return (n_atoms - 1) * gamma_c; }
    double omega_c() const { return Gamma() / 4.0; }
};

/// Composite mean-field parameters (gamma, Gamma, omega). The mean-field and
/// squeezing layers work with these directly; Gamma/gamma is treated as a
/// free ratio and N is never inferred from it.
///
/// For gamma_s = 0 the collective factorization applies: gamma_eff = 0 and
/// Gamma_eff = N * gamma_c.
struct MfParams {
    double gamma = 0.0;
    double Gamma = 0.0;
    double omega = 0.0;

    MfParams() = default;
    MfParams(double g, double G, double om) : gamma(g), Gamma(G), omega(om) {}

    static MfParams from_model(const ModelParams& p) {
        if (p.gamma_s == 0.0)
            return {0.0, p.n_atoms * p.gamma_c, p.omega};
        return {p.gamma(), p.Gamma(), p.omega};
    }

    double omega_c() const { return Gamma / 4.0; }
};

} // namespace dickesim
