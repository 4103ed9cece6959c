#pragma once

#include "dickesim/meanfield.hpp"
#include "dickesim/params.hpp"

namespace dickesim {

/// Rotated Holstein-Primakoff frame around the lower-branch mean spin.
struct HpFrame {
    double theta = 0.0;  ///< arccos(sz/|s|), in [pi/2, pi] on the lower branch
    double s_norm = 0.0; ///< |s| = sqrt(sz^2 + sy^2)
    double j_mf = 0.0;   ///< N |s| / 2; 0 when N was not supplied
};

HpFrame hp_frame(const MeanFieldState& lower_branch, int n_atoms = 0);

/// Steady-state bosonic correlators of the collective fluctuation mode.
struct HpCorrelators {
    double n_a = 0.0;  ///< <a^dag a>
    double sq_a = 0.0; ///< <a^2> (real in this frame)
};

/// Closed-form correlators; throws a fluctuation-instability error when any
/// of the three denominators -Gamma|s|cos(theta) + gamma(...) is <= 0.
HpCorrelators hp_correlators(const MfParams& p, const MeanFieldState& lower_branch);

/// xi^2 = 1 + 2(<a^dag a> - |<a^2>|) evaluated on the lower mean-field
/// branch of the given parameters.
struct Xi2Result {
    double xi2 = 1.0;
    HpFrame frame;
    bool linearization_suspect = false; ///< thin denominator margin or small j_mf
};

Xi2Result xi2_analytic(const MfParams& p, int n_atoms = 0);

/// Gamma >> gamma closed form in r = Omega/Omega_c, valid on [0, 1/sqrt(2)]:
///   xi^2 = (1 + sqrt(1-2r^2)) / (sqrt(2) sqrt(1 + r^2 + sqrt(1-2r^2))).
/// Decreases monotonically to 1/sqrt(3) at the right endpoint.
double xi2_large_gamma_limit(double omega_ratio);

} // namespace dickesim
