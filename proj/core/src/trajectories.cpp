#include "dickesim/trajectories.hpp"

#include "dickesim/expm.hpp"
#include "dickesim/observables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace dickesim {

namespace {

/// No-jump / jump evolution of one trajectory. The state is kept
/// unnormalized between jumps; its squared norm decays from 1 toward the
/// current jump threshold.
class Unraveling {
public:
    Unraveling(const ModelParams& params, const FullStateVector& initial, std::uint64_t seed,
               double sample_dt, const FullStateVector* crss)
        : params_(params), ops_(params.n_atoms), rng_(seed), sample_dt_(sample_dt),
          crss_(crss) {
        params_.validate();
        if (sample_dt <= 0)
            throw std::domain_error("mcwf_run: sample_dt must be positive");
        if (initial.size() != ops_.dim())
            throw std::invalid_argument("mcwf_run: initial state dimension mismatch");
        psi_ = initial / initial.norm();
        rec_.seed = seed;
        const double rate_scale = std::max(params.gamma_s, params.gamma_c);
        time_tol_ = rate_scale > 0 ? 1e-6 / rate_scale : 1e-6;
        jump_target_ = draw();
        sample_state(0.0, psi_);
        next_sample_ = sample_dt_;
    }

    /// Evolve to seg_end with the drive amplitude omega.
    void run_until(double seg_end, double omega) {
        auto apply = [this, omega](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
            // -i H_eff = -2 i Omega Sx - (gamma_c/2) S+S- - (gamma_s/2)(N/2 + Sz)
            ops_.apply_sx(in, out);
            out *= Complex(0.0, -2.0 * omega);
            if (params_.gamma_c > 0) {
                ops_.apply_splus_sminus(in, tmp_);
                out -= (0.5 * params_.gamma_c) * tmp_;
            }
            if (params_.gamma_s > 0) {
                ops_.apply_sz(in, tmp_);
                out -= (0.5 * params_.gamma_s) * tmp_;
                out -= (0.25 * params_.gamma_s * params_.n_atoms) * in;
            }
        };

        double chunk = std::min(sample_dt_, seg_end - t_);
        while (t_ < seg_end - 1e-13 * std::max(1.0, seg_end)) {
            double dt = std::min(chunk, seg_end - t_);
            KrylovBasis kb(apply, psi_, 16);
            const double scale = psi_.norm();
            while (kb.refine(dt, 1e-9 * scale) > 1e-9 * scale && dt > 1e-300)
                dt *= 0.5;
            if (kb.eval_norm2(dt) >= jump_target_) {
                emit_samples(kb, dt);
                psi_ = kb.eval(dt);
                t_ += dt;
                chunk = std::min(chunk * 1.5, sample_dt_);
            } else {
                // the squared norm is monotone decreasing: bisect the jump time
                double lo = 0.0, hi = dt;
                while (hi - lo > time_tol_) {
                    const double mid = 0.5 * (lo + hi);
                    if (kb.eval_norm2(mid) >= jump_target_)
                        lo = mid;
                    else
                        hi = mid;
                }
                const double tau = 0.5 * (lo + hi);
                emit_samples(kb, tau);
                t_ += tau;
                do_jump(kb.eval(tau));
                jump_target_ = draw();
            }
        }
    }

    TrajectoryRecord take(double t_final) {
        rec_.t_final = t_final;
        rec_.final_state = psi_ / psi_.norm();
        return std::move(rec_);
    }

private:
    double draw() { return unif_(rng_); }

    void sample_state(double t, const FullStateVector& raw) {
        const FullStateVector psi = raw / raw.norm();
        rec_.times.push_back(t);
        rec_.sz.push_back(sz_mean_full(ops_, psi));
        rec_.s2.push_back(s2_mean_full(ops_, psi));
        rec_.intensity.push_back(intensity_full(ops_, psi));
        if (crss_)
            rec_.crss_fidelity.push_back(std::norm(crss_->dot(psi)));
    }

    /// Emit every sample point falling in (t_, t_ + tau].
    void emit_samples(const KrylovBasis& kb, double tau) {
        while (next_sample_ <= t_ + tau + 1e-12 * std::max(1.0, t_ + tau)) {
            sample_state(next_sample_, kb.eval(next_sample_ - t_));
            next_sample_ += sample_dt_;
        }
    }

    void do_jump(const FullStateVector& at_jump) {
        const int n = params_.n_atoms;
        std::vector<double> weights;
        weights.reserve(n + 1);
        ops_.apply_sminus(at_jump, tmp_);
        weights.push_back(params_.gamma_c * tmp_.squaredNorm());

        std::vector<double> pops(n, 0.0);
        for (int b = 0; b < ops_.dim(); ++b) {
            const double p = std::norm(at_jump[b]);
            if (p == 0.0) continue;
            for (int k = 0; k < n; ++k)
                if (b & (1 << k))
                    pops[k] += p;
        }
        for (int k = 0; k < n; ++k)
            weights.push_back(params_.gamma_s * pops[k]);

        double total = 0.0;
        for (double w : weights)
            total += w;
        if (total <= 0.0) {
            psi_ = at_jump / at_jump.norm(); // no open channel; renormalize and move on
            return;
        }
        double u = draw() * total;
        int channel = -1; // collective
        if (u >= weights[0]) {
            u -= weights[0];
            for (int k = 0; k < n; ++k) {
                channel = k;
                if (u < weights[k + 1])
                    break;
                u -= weights[k + 1];
            }
        }
        FullStateVector jumped(ops_.dim());
        if (channel < 0)
            ops_.apply_sminus(at_jump, jumped);
        else
            ops_.apply_sigma(channel, at_jump, jumped);
        psi_ = jumped / jumped.norm();
        rec_.jumps.push_back({t_, channel});
    }

    ModelParams params_;
    FullSpaceOps ops_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    double sample_dt_;
    const FullStateVector* crss_;
    FullStateVector psi_, tmp_;
    double t_ = 0.0;
    double next_sample_ = 0.0;
    double jump_target_ = 0.0;
    double time_tol_ = 1e-6;
    TrajectoryRecord rec_;
};

} // namespace

TrajectoryRecord mcwf_run(const ModelParams& params, const FullStateVector& initial,
                          double t_final, std::uint64_t seed, double sample_dt,
                          const FullStateVector* crss) {
    Unraveling u(params, initial, seed, sample_dt, crss);
    u.run_until(t_final, params.omega);
    return u.take(t_final);
}

TrajectoryRecord quench_protocol(const ModelParams& params_base,
                                 const std::vector<std::pair<double, double>>& schedule,
                                 const FullStateVector& initial, double t_final,
                                 std::uint64_t seed, double sample_dt,
                                 const FullStateVector* crss) {
    if (schedule.empty() || schedule.front().first != 0.0)
        throw std::domain_error("quench_protocol: schedule must start at t = 0");
    for (size_t k = 1; k < schedule.size(); ++k)
        if (schedule[k].first <= schedule[k - 1].first)
            throw std::domain_error("quench_protocol: schedule times must increase");

    Unraveling u(params_base, initial, seed, sample_dt, crss);
    TrajectoryRecord rec;
    std::vector<double> boundaries;
    for (size_t k = 0; k < schedule.size(); ++k) {
        const double seg_end = k + 1 < schedule.size()
                                   ? std::min(schedule[k + 1].first, t_final)
                                   : t_final;
        if (k > 0 && schedule[k].first < t_final)
            boundaries.push_back(schedule[k].first);
        u.run_until(seg_end, schedule[k].second);
        if (seg_end >= t_final)
            break;
    }
    rec = u.take(t_final);
    rec.schedule_boundaries = std::move(boundaries);
    return rec;
}

std::vector<TrajectoryRecord> run_ensemble(const ModelParams& params,
                                           const FullStateVector& initial, double t_final,
                                           std::uint64_t seed_begin, std::uint64_t seed_end,
                                           double sample_dt, int n_threads,
                                           const FullStateVector* crss) {
    if (seed_end <= seed_begin)
        throw std::domain_error("run_ensemble: empty seed range");
    const std::size_t count = static_cast<std::size_t>(seed_end - seed_begin);
    std::vector<TrajectoryRecord> out(count);
    n_threads = std::max(1, n_threads);

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= count)
                return;
            out[k] = mcwf_run(params, initial, t_final, seed_begin + k, sample_dt, crss);
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n_threads; ++k)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    return out;
}

std::vector<int> photon_counts(const TrajectoryRecord& record, double bin_width,
                               DetectorPort port) {
    if (bin_width <= 0)
        throw std::domain_error("photon_counts: bin width must be positive");
    const int n_bins = static_cast<int>(std::ceil(record.t_final / bin_width));
    std::vector<int> counts(std::max(n_bins, 0), 0);
    for (const auto& j : record.jumps) {
        const bool individual = !j.collective();
        if ((port == DetectorPort::Perpendicular) != individual)
            continue;
        const int bin = std::min(static_cast<int>(j.time / bin_width), n_bins - 1);
        if (bin >= 0)
            ++counts[bin];
    }
    return counts;
}

SwitchingStats detect_switches(const TrajectoryRecord& record, double low, double high) {
    if (low >= high)
        throw std::domain_error("detect_switches: need low < high");
    SwitchingStats st;
    st.threshold_low = low;
    st.threshold_high = high;

    int phase = 0; // 0 unknown, +1 plus (sz < low), -1 minus (sz > high)
    double entered = 0.0;
    int last_plus_idx = -1;
    for (size_t k = 0; k < record.times.size(); ++k) {
        const double sz = record.sz[k];
        const double t = record.times[k];
        int here = 0;
        if (sz < low)
            here = +1;
        else if (sz > high)
            here = -1;
        if (here == 0 || here == phase) {
            if (phase == +1 && here == +1)
                last_plus_idx = static_cast<int>(k);
            continue;
        }
        if (phase == +1) {
            st.dwell_plus.push_back(t - entered);
            ++st.transitions;
            st.plus_to_minus_windows.emplace_back(last_plus_idx, static_cast<int>(k));
        } else if (phase == -1) {
            st.dwell_minus.push_back(t - entered);
            ++st.transitions;
        }
        phase = here;
        entered = t;
        if (here == +1)
            last_plus_idx = static_cast<int>(k);
    }

    double total_plus = 0.0, total_minus = 0.0;
    for (double d : st.dwell_plus)
        total_plus += d;
    for (double d : st.dwell_minus)
        total_minus += d;
    if (!st.dwell_plus.empty() && total_plus > 0)
        st.rate_plus = st.dwell_plus.size() / total_plus;
    if (!st.dwell_minus.empty() && total_minus > 0)
        st.rate_minus = st.dwell_minus.size() / total_minus;
    st.sufficient = st.dwell_plus.size() >= 2 && st.dwell_minus.size() >= 2;
    return st;
}

FullStateVector prepare_singlet_product(int n_atoms) {
    if (n_atoms < 2 || n_atoms % 2 != 0)
        throw std::domain_error("prepare_singlet_product: N must be even and >= 2");
    const int pairs = n_atoms / 2;
    const int dim = 1 << n_atoms;
    FullStateVector psi = FullStateVector::Zero(dim);
    const double amp = std::pow(std::sqrt(0.5), pairs);
    for (int pattern = 0; pattern < (1 << pairs); ++pattern) {
        int basis = 0;
        int sign = 1;
        for (int k = 0; k < pairs; ++k) {
            if (pattern & (1 << k)) { // excite the second atom of the pair: minus sign
                basis |= 1 << (2 * k + 1);
                sign = -sign;
            } else {
                basis |= 1 << (2 * k);
            }
        }
        psi[basis] = sign * amp;
    }
    return psi;
}

} // namespace dickesim
