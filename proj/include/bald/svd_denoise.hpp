#pragma once

#include <vector>

#include "bald/spectral_sequence.hpp"

namespace bald {

// Patch tiling configuration. Boundary policy is truncate-to-fit: the final
// row/column of patch positions is shifted inward so every patch stays in
// bounds and every pixel is covered. threads = 0 selects the hardware count.
struct PatchConfig {
    int patch_size = 8;
    int stride = 4;
    int threads = 0;
};

// Top-left patch coordinates along one axis: 0, stride, 2*stride, ...,
// with extent - s appended when the regular grid does not already end there.
std::vector<int> patch_positions(int extent, int patch_size, int stride);

// Hard-threshold stage. Each s x s x C patch is flattened to an s^2 x C
// matrix and decomposed by thin SVD; coefficients U*Sigma with magnitude
// below 3 sigma are zeroed, the survivor count N_p sets the aggregation
// weight (1 + N_p)^-1, and overlapping reconstructions are averaged by
// total weight.
SpectralSequence denoise_hard(const SpectralSequence& seq, double sigma,
                              const PatchConfig& cfg = {});

// Wiener stage guided by an oracle (normally the hard-stage output). The
// guide patch is projected onto the noisy patch's right singular basis,
// each coefficient shrunk by rho = U_G^2 / (U_G^2 + sigma^2), and patches
// aggregated with weight (1 + S_P)^-1 where S_P = sum rho^2.
SpectralSequence denoise_wiener(const SpectralSequence& seq, const SpectralSequence& guide,
                                double sigma, const PatchConfig& cfg = {});

}  // namespace bald
