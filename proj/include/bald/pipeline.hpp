#pragma once

#include <functional>

#include "bald/noise_model.hpp"
#include "bald/spectral_sequence.hpp"
#include "bald/svd_denoise.hpp"

namespace bald {

// Full-pipeline parameters. stride = -1 selects the default patch_size / 2.
struct BaldParams {
    int t1 = 10;
    int t2 = 100;
    int patch_size = 8;
    int stride = -1;
    int threads = 0;
};

struct BaldResult {
    SpectralSequence denoised;
    NoiseCurve curve;
    double sigma_target = 0.0;
};

// Any denoiser operating in the variance-stabilized domain: maps a sequence
// and the stabilized noise deviation to a sequence of identical shape.
using Denoiser = std::function<SpectralSequence(const SpectralSequence&, double)>;

// The built-in two-stage stack (hard threshold then oracle-guided Wiener)
// packaged as a Denoiser.
Denoiser make_svd_denoiser(const PatchConfig& cfg);

// Full pipeline: estimate the noise curve (unless an override is supplied),
// stabilize, run the two-stage SVD denoiser with sigma equal to the curve's
// knot mean, and invert the stabilization. Returns the curve for audit.
BaldResult bald(const SpectralSequence& seq, const BaldParams& params = {},
                const NoiseCurve* curve_override = nullptr);

// Stabilize, apply an arbitrary external denoiser, invert. The external
// callable must preserve the sequence shape.
SpectralSequence wrap_denoiser(const SpectralSequence& seq, const Denoiser& external,
                               int t1 = 10, int t2 = 100);

}  // namespace bald
