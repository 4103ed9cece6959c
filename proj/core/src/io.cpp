#include "dickesim/io.hpp"

#include <ostream>
#include <sstream>

namespace dickesim {

nlohmann::json block_to_json(const BlockDensityMatrix& rho, const DickeLadder& ladder) {
    nlohmann::json blocks = nlohmann::json::object();
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const MatrixXcd& m = rho.block(b);
        nlohmann::json entries = nlohmann::json::array();
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                entries.push_back({m(r, c).real(), m(r, c).imag()});
        blocks[std::to_string(ladder.twice_j(b))] = std::move(entries);
    }
    return {{"n_atoms", ladder.n_atoms()}, {"blocks", std::move(blocks)}};
}

BlockDensityMatrix block_from_json(const nlohmann::json& j, const DickeLadder& ladder) {
    if (j.at("n_atoms").get<int>() != ladder.n_atoms())
        throw std::invalid_argument("block_from_json: atom count mismatch");
    BlockDensityMatrix rho(ladder);
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const auto& entries = j.at("blocks").at(std::to_string(ladder.twice_j(b)));
        const int d = ladder.block_dim(b);
        if (static_cast<int>(entries.size()) != d * d)
            throw std::invalid_argument("block_from_json: block size mismatch");
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                const auto& e = entries[r * d + c];
                rho.block(b)(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            }
    }
    return rho;
}

nlohmann::json observables_to_json(const ObservableSet& obs) {
    nlohmann::json pm = nlohmann::json::object();
    for (const auto& [twice_m, p] : obs.pm_distribution)
        pm[std::to_string(twice_m)] = p;
    nlohmann::json out = {
        {"sz_mean", obs.sz_mean},     {"s2_mean", obs.s2_mean},
        {"intensity", obs.intensity}, {"g2_zero", obs.g2_zero},
        {"xi_squared", obs.xi_squared}, {"pm", std::move(pm)},
    };
    if (obs.crss_fidelity)
        out["crss_fidelity"] = *obs.crss_fidelity;
    return out;
}

std::string observables_csv_header() {
    return "omega_ratio,sz_mean,s2_mean,intensity,g2_zero,xi_squared,crss_fidelity";
}

std::string observables_to_csv_row(double omega_ratio, const ObservableSet& obs) {
    std::ostringstream os;
    os.precision(15);
    os << omega_ratio << ',' << obs.sz_mean << ',' << obs.s2_mean << ','
       << obs.intensity << ',' << obs.g2_zero << ',' << obs.xi_squared << ',';
    if (obs.crss_fidelity)
        os << *obs.crss_fidelity;
    return os.str();
}

void write_trajectory_jsonl(std::ostream& os, const TrajectoryRecord& record) {
    nlohmann::json meta = {
        {"type", "meta"},
        {"seed", record.seed},
        {"t_final", record.t_final},
        {"n_samples", record.times.size()},
        {"n_jumps", record.jumps.size()},
        {"schedule_boundaries", record.schedule_boundaries},
        {"schema_version", kSchemaVersion},
    };
    os << meta.dump() << '\n';

    size_t ji = 0;
    for (size_t k = 0; k < record.times.size(); ++k) {
        // interleave jumps in time order
        while (ji < record.jumps.size() && record.jumps[ji].time <= record.times[k]) {
            nlohmann::json jump = {{"type", "jump"},
                                   {"t", record.jumps[ji].time},
                                   {"channel", record.jumps[ji].channel}};
            os << jump.dump() << '\n';
            ++ji;
        }
        nlohmann::json sample = {{"type", "sample"},
                                 {"t", record.times[k]},
                                 {"sz", record.sz[k]},
                                 {"s2", record.s2[k]},
                                 {"intensity", record.intensity[k]}};
        if (!record.crss_fidelity.empty())
            sample["crss_fidelity"] = record.crss_fidelity[k];
        os << sample.dump() << '\n';
    }
    for (; ji < record.jumps.size(); ++ji) {
        nlohmann::json jump = {{"type", "jump"},
                               {"t", record.jumps[ji].time},
                               {"channel", record.jumps[ji].channel}};
        os << jump.dump() << '\n';
    }
}

nlohmann::json run_manifest(const nlohmann::json& resolved_config,
                            std::uint64_t seed_begin, std::uint64_t seed_end) {
    return {
        {"schema_version", kSchemaVersion},
        {"code_version", kCodeVersion},
        {"config", resolved_config},
        {"seed_begin", seed_begin},
        {"seed_end", seed_end},
    };
}

} // namespace dickesim
