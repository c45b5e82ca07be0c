#pragma once

#include <cstddef>
#include <vector>

#include "bald/spectral_sequence.hpp"

namespace bald {

// Per-interior-frame noise observations: for every foreground pixel and every
// offset k in [1, C-2], the observed intensity u_k and the second-difference
// noise sample (2 u_k - u_{k-1} - u_{k+1}) / sqrt(6). The global intensity
// range over all frames (foreground only) is captured for binning.
struct NoiseSamples {
    std::vector<std::vector<double>> intensity;  // one vector per interior frame
    std::vector<std::vector<double>> noise;
    double intensity_min = 0.0;
    double intensity_max = 0.0;
};

NoiseSamples extract_noise_samples(const SpectralSequence& seq);

// Piecewise-linear map intensity -> noise standard deviation with t2 knots,
// built from t1 equal-width bins merged across frames by median.
struct NoiseCurve {
    std::vector<double> intensity;  // t2 knots, strictly increasing
    std::vector<double> sigma;      // per-knot deviation, all above the floor
    double intensity_min = 0.0;
    double intensity_max = 0.0;
    int t1 = 0;
    int t2 = 0;
    std::vector<long> bin_counts;  // total samples per original t1 bin

    double value_at(double u) const;
    double knot_mean() const;
};

// Per frame: bin intensities into t1 equal-width bins over the captured
// range, take the RMS of each bin's noise samples, merge the per-frame bin
// values by median (skipping empty bins), floor-fill degenerate bins from
// the nearest valid neighbor, and linearly interpolate bin centers to t2
// knots spanning [intensity_min, intensity_max].
NoiseCurve estimate_noise_curve(const NoiseSamples& samples, int t1 = 10, int t2 = 100);

// Monotone lookup pair f / f^-1 plus the target deviation sigma (mean of the
// curve's knot deviations). f is the cumulative trapezoidal integral of
// sigma / g(t) from intensity_min across the knot grid.
struct VstTransform {
    std::vector<double> u_knots;  // intensities, strictly increasing
    std::vector<double> f_knots;  // transformed values, strictly increasing
    double sigma_target = 0.0;

    double forward(double u) const;
    double inverse(double v) const;
};

VstTransform build_vst(const NoiseCurve& curve);

// Pixel-wise lookup with linear interpolation between knots. Out-of-range
// inputs are clamped to the table endpoints; the clamp count is reported
// through `clamped` when provided.
SpectralSequence apply_vst(const SpectralSequence& seq, const VstTransform& t,
                           std::size_t* clamped = nullptr);
SpectralSequence apply_ivst(const SpectralSequence& seq, const VstTransform& t,
                            std::size_t* clamped = nullptr);

}  // namespace bald
