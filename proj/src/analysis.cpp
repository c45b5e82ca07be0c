#include "bald/analysis.hpp"

#include <algorithm>
#include <thread>

#include "bald/interp.hpp"

namespace bald {

double mtr_asym(const std::vector<double>& offsets_ppm, const std::vector<double>& z,
                double dw) {
    if (offsets_ppm.size() != z.size() || offsets_ppm.size() < 2)
        throw ConfigError("mtr_asym: offsets and spectrum lengths differ or too short");
    if (!(dw > 0.0)) throw ConfigError("mtr_asym: offset magnitude must be positive");
    std::vector<double> xs = offsets_ppm;
    std::vector<double> ys = z;
    if (xs.front() > xs.back()) {  // stored descending; flip to ascending
        std::reverse(xs.begin(), xs.end());
        std::reverse(ys.begin(), ys.end());
    }
    if (-dw < xs.front() || dw > xs.back())
        throw ConfigError("mtr_asym: offset magnitude outside the sampled range");
    return interp_ascending(xs, ys, -dw) - interp_ascending(xs, ys, dw);
}

ScalarMap aptw_map(const SpectralSequence& seq) {
    const auto& offs = seq.offsets_ppm();
    const double lo = std::min(offs.front(), offs.back());
    const double hi = std::max(offs.front(), offs.back());
    if (lo > -3.5 || hi < 3.5)
        throw ConfigError("aptw_map: offsets do not cover +-3.5 ppm");

    ScalarMap map;
    map.width = seq.width();
    map.height = seq.height();
    map.values.assign(static_cast<size_t>(seq.height()) * seq.width(), 0.0);
    map.valid.assign(map.values.size(), 0);

    std::vector<double> z(seq.n_offsets());
    for (int y = 0; y < seq.height(); ++y)
        for (int x = 0; x < seq.width(); ++x) {
            const size_t at = static_cast<size_t>(y) * seq.width() + x;
            if (!seq.in_mask(y, x)) continue;  // flagged 0
            for (int k = 0; k < seq.n_offsets(); ++k) z[k] = seq(k, y, x);
            map.values[at] = 100.0 * mtr_asym(offs, z, 3.5);
            map.valid[at] = 1;
        }
    return map;
}

const std::vector<double>& ContrastMaps::map_for(const std::string& name) const {
    for (size_t i = 0; i < pool_names.size(); ++i)
        if (pool_names[i] == name) return amplitude[i];
    throw ConfigError("no contrast map named '" + name + "'");
}

ContrastMaps contrast_maps(const SpectralSequence& seq, const std::vector<PoolSpec>& pools,
                           const FitOptions& opts, int threads) {
    const PoolLayout layout = param_layout(pools);
    ContrastMaps maps;
    maps.width = seq.width();
    maps.height = seq.height();
    const size_t plane = static_cast<size_t>(seq.height()) * seq.width();
    for (const auto& pool : pools) {
        maps.pool_names.push_back(pool.name);
        maps.amplitude.emplace_back(plane, 0.0);
    }
    maps.converged.assign(plane, 0);

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n_threads = std::min(n_threads, seq.height());

    // Per-pixel fits are independent; workers own disjoint row ranges.
    auto worker = [&](int row_lo, int row_hi) {
        std::vector<double> z(seq.n_offsets());
        for (int y = row_lo; y < row_hi; ++y)
            for (int x = 0; x < seq.width(); ++x) {
                const size_t at = static_cast<size_t>(y) * seq.width() + x;
                if (!seq.in_mask(y, x)) continue;  // flagged, amplitudes stay 0
                for (int k = 0; k < seq.n_offsets(); ++k) z[k] = seq(k, y, x);
                const FitResult fit = fit_lorentzian(seq.offsets_ppm(), z, pools, opts);
                for (size_t i = 0; i < pools.size(); ++i)
                    maps.amplitude[i][at] = fit.params[layout.amp_index[i]];
                maps.converged[at] = fit.converged ? 1 : 0;
            }
    };

    if (n_threads <= 1) {
        worker(0, seq.height());
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int ti = 0; ti < n_threads; ++ti)
            pool.emplace_back(worker, seq.height() * ti / n_threads,
                              seq.height() * (ti + 1) / n_threads);
        for (auto& th : pool) th.join();
    }
    return maps;
}

}  // namespace bald
