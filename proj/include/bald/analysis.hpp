#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bald/lorentzian.hpp"
#include "bald/spectral_sequence.hpp"

namespace bald {

// Asymmetry of a z-spectrum at offset magnitude dw: z(-dw) - z(+dw), with
// linear interpolation when +-dw fall between sampled offsets. The offsets
// may be stored ascending or descending.
double mtr_asym(const std::vector<double>& offsets_ppm, const std::vector<double>& z,
                double dw);

// H x W scalar map plus a validity plane (0 marks flagged pixels: off-mask
// for aptw_map, non-converged fits for contrast maps).
struct ScalarMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    double at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }
};

// Per-pixel MTR asymmetry at +3.5 ppm, in percent. Off-mask pixels are 0 and
// flagged invalid.
ScalarMap aptw_map(const SpectralSequence& seq);

// Per-pixel multi-pool fit results: one amplitude map per pool plus the
// shared convergence plane. Off-mask pixels hold 0 and are flagged.
struct ContrastMaps {
    int width = 0;
    int height = 0;
    std::vector<std::string> pool_names;
    std::vector<std::vector<double>> amplitude;  // one H*W map per pool
    std::vector<std::uint8_t> converged;

    const std::vector<double>& map_for(const std::string& name) const;
};

ContrastMaps contrast_maps(const SpectralSequence& seq,
                           const std::vector<PoolSpec>& pools = default_pools(),
                           const FitOptions& opts = {}, int threads = 0);

}  // namespace bald
