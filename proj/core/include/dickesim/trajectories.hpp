#pragma once

#include "dickesim/fullspace.hpp"
#include "dickesim/params.hpp"

#include <cstdint>
#include <vector>

namespace dickesim {

/// One recorded quantum jump. channel = -1 is the collective port
/// (sqrt(gamma_c) S-), channels 0..N-1 are the individual ports
/// (sqrt(gamma_s) sigma_n).
struct JumpEvent {
    double time = 0.0;
    int channel = -1;

    bool collective() const { return channel < 0; }
};

/// A single unraveled trajectory: sampled observables on the normalized
/// state plus the complete jump log.
struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<double> sz;
    std::vector<double> s2;
    std::vector<double> intensity;
    std::vector<double> crss_fidelity; ///< empty unless a comparator was given
    std::vector<JumpEvent> jumps;
    std::vector<double> schedule_boundaries; ///< quench protocol switch times
    FullStateVector final_state;
    double t_final = 0.0;
};

/// Telegraph statistics extracted from a trajectory.
struct SwitchingStats {
    std::vector<double> dwell_plus;  ///< completed dwell intervals in the + phase
    std::vector<double> dwell_minus;
    double rate_plus = 0.0;  ///< empirical escape rate out of +
    double rate_minus = 0.0;
    double threshold_low = 0.0;
    double threshold_high = 0.0;
    int transitions = 0;
    bool sufficient = false; ///< >= 2 transitions and >= 2 dwells per phase
    /// index ranges [sample_lo, sample_hi] of each detected + -> - crossing
    std::vector<std::pair<int, int>> plus_to_minus_windows;
};

/// Monte-Carlo wavefunction run in the full 2^N space (N <= 12): Krylov
/// no-jump propagation of exp(-i H_eff t), norm-threshold jump detection with
/// bisection to time tolerance 1e-6 / max rate, cumulative-probability
/// channel selection. Deterministic per (params, seed).
/// crss: optional normalized comparator for the fidelity column.
TrajectoryRecord mcwf_run(const ModelParams& params, const FullStateVector& initial,
                          double t_final, std::uint64_t seed, double sample_dt,
                          const FullStateVector* crss = nullptr);

/// Piecewise-constant drive: schedule entries (t_start, omega) with strictly
/// increasing times, first at t = 0. Runs until t_final.
TrajectoryRecord quench_protocol(const ModelParams& params_base,
                                 const std::vector<std::pair<double, double>>& schedule,
                                 const FullStateVector& initial, double t_final,
                                 std::uint64_t seed, double sample_dt,
                                 const FullStateVector* crss = nullptr);

/// Independent trajectories over a seed range, optionally on a thread pool.
std::vector<TrajectoryRecord> run_ensemble(const ModelParams& params,
                                           const FullStateVector& initial, double t_final,
                                           std::uint64_t seed_begin, std::uint64_t seed_end,
                                           double sample_dt, int n_threads = 1,
                                           const FullStateVector* crss = nullptr);

enum class DetectorPort { Perpendicular, Parallel };

/// Binned jump counts: Perpendicular counts individual-channel events
/// (expectation (N/2 + <Sz>) gamma_s dt per bin), Parallel counts collective
/// events (expectation <S+ S-> gamma_c dt per bin).
std::vector<int> photon_counts(const TrajectoryRecord& record, double bin_width,
                               DetectorPort port);

/// Two-threshold hysteresis detector on the sampled <Sz> series. The + phase
/// is sz < low (the correlated, strongly inverted branch), the - phase is
/// sz > high.
SwitchingStats detect_switches(const TrajectoryRecord& record, double low, double high);

/// Product of nearest-neighbor singlets, (sigma_1^dag - sigma_2^dag)...|g...g>,
/// normalized; has <S^2> = 0 exactly. N must be even.
FullStateVector prepare_singlet_product(int n_atoms);

} // namespace dickesim
