#include "bald/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bald/interp.hpp"

namespace bald {

namespace {

constexpr double kSqrt6 = 2.4494897427831780982;

// Median of a non-empty vector (mean of the middle pair for even sizes).
double median_of(std::vector<double>& v) {
    const size_t n = v.size();
    const size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

}  // namespace

NoiseSamples extract_noise_samples(const SpectralSequence& seq) {
    const int C = seq.n_offsets();
    if (C < 3) throw ConfigError("noise extraction needs at least 3 offsets");

    NoiseSamples out;
    out.intensity.resize(C - 2);
    out.noise.resize(C - 2);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 0; k < C; ++k)
        for (int y = 0; y < seq.height(); ++y)
            for (int x = 0; x < seq.width(); ++x) {
                if (!seq.in_mask(y, x)) continue;
                const double v = seq(k, y, x);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                any = true;
            }
    if (!any) throw DataError("noise extraction: mask excludes every pixel");
    out.intensity_min = lo;
    out.intensity_max = hi;

    // Interior frames only: the second difference annihilates signals that
    // are affine in the offset index, leaving (approximately) pure noise.
    for (int k = 1; k < C - 1; ++k) {
        auto& us = out.intensity[k - 1];
        auto& ds = out.noise[k - 1];
        us.reserve(static_cast<size_t>(seq.height()) * seq.width());
        ds.reserve(us.capacity());
        for (int y = 0; y < seq.height(); ++y)
            for (int x = 0; x < seq.width(); ++x) {
                if (!seq.in_mask(y, x)) continue;
                us.push_back(seq(k, y, x));
                ds.push_back((2.0 * seq(k, y, x) - seq(k - 1, y, x) - seq(k + 1, y, x)) /
                             kSqrt6);
            }
    }
    return out;
}

NoiseCurve estimate_noise_curve(const NoiseSamples& samples, int t1, int t2) {
    if (t1 < 2) throw ConfigError("t1 must be >= 2, got " + std::to_string(t1));
    if (t2 < t1) throw ConfigError("t2 must be >= t1");
    if (samples.intensity.empty())
        throw ConfigError("no frames contributed noise samples");

    const double gmin = samples.intensity_min;
    const double gmax = samples.intensity_max;
    const double L = gmax - gmin;
    const size_t n_frames = samples.intensity.size();

    // Per-frame, per-bin RMS of the noise samples. Half-open bins, last bin
    // closed, so every sample lands in exactly one bin.
    std::vector<std::vector<double>> per_bin_values(t1);
    std::vector<long> counts(t1, 0);
    std::vector<double> sumsq(t1), num(t1);
    for (size_t fi = 0; fi < n_frames; ++fi) {
        std::fill(sumsq.begin(), sumsq.end(), 0.0);
        std::fill(num.begin(), num.end(), 0.0);
        const auto& us = samples.intensity[fi];
        const auto& ds = samples.noise[fi];
        for (size_t i = 0; i < us.size(); ++i) {
            int b = L > 0.0 ? static_cast<int>((us[i] - gmin) / L * t1) : 0;
            b = std::clamp(b, 0, t1 - 1);
            sumsq[b] += ds[i] * ds[i];
            num[b] += 1.0;
            ++counts[b];
        }
        for (int b = 0; b < t1; ++b)
            if (num[b] > 0.0) per_bin_values[b].push_back(std::sqrt(sumsq[b] / num[b]));
    }

    // Median across frames, skipping frames whose bin was empty.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> merged(t1, nan);
    for (int b = 0; b < t1; ++b)
        if (!per_bin_values[b].empty()) merged[b] = median_of(per_bin_values[b]);

    // Deviations below the floor cannot feed the transform (it divides by
    // g); such bins take the nearest valid neighbor's value. The floor is
    // kept strictly positive so an exactly noise-free sequence fails loudly
    // instead of producing a zero curve.
    const double floor = std::max(1e-6 * L, std::numeric_limits<double>::min());
    std::vector<int> valid;
    for (int b = 0; b < t1; ++b)
        if (!std::isnan(merged[b]) && merged[b] >= floor) valid.push_back(b);
    if (valid.empty()) throw EstimationError("noise curve estimation: all bins empty");
    for (int b = 0; b < t1; ++b) {
        if (!std::isnan(merged[b]) && merged[b] >= floor) continue;
        int best = valid.front();
        for (int v : valid)
            if (std::abs(v - b) < std::abs(best - b)) best = v;
        merged[b] = merged[best];
    }

    std::vector<double> centers(t1);
    for (int b = 0; b < t1; ++b) centers[b] = gmin + (b + 0.5) * L / t1;

    NoiseCurve curve;
    curve.intensity_min = gmin;
    curve.intensity_max = gmax;
    curve.t1 = t1;
    curve.t2 = t2;
    curve.bin_counts = std::move(counts);
    curve.intensity.resize(t2);
    curve.sigma.resize(t2);
    for (int j = 0; j < t2; ++j) {
        curve.intensity[j] = j == t2 - 1 ? gmax : gmin + L * j / (t2 - 1);
        curve.sigma[j] = interp_ascending(centers, merged, curve.intensity[j]);
    }
    return curve;
}

double NoiseCurve::value_at(double u) const { return interp_ascending(intensity, sigma, u); }

double NoiseCurve::knot_mean() const {
    double s = 0.0;
    for (double g : sigma) s += g;
    return s / static_cast<double>(sigma.size());
}

VstTransform build_vst(const NoiseCurve& curve) {
    VstTransform t;
    t.sigma_target = curve.knot_mean();
    t.u_knots = curve.intensity;
    t.f_knots.resize(curve.intensity.size());
    t.f_knots[0] = 0.0;
    // Cumulative trapezoid of sigma / g(t) over the knot grid; g > 0 by the
    // curve's floor invariant, so f is strictly increasing.
    for (size_t j = 1; j < curve.intensity.size(); ++j) {
        const double du = curve.intensity[j] - curve.intensity[j - 1];
        const double inv0 = t.sigma_target / curve.sigma[j - 1];
        const double inv1 = t.sigma_target / curve.sigma[j];
        t.f_knots[j] = t.f_knots[j - 1] + du * 0.5 * (inv0 + inv1);
    }
    return t;
}

double VstTransform::forward(double u) const { return interp_ascending(u_knots, f_knots, u); }

double VstTransform::inverse(double v) const { return interp_ascending(f_knots, u_knots, v); }

namespace {

SpectralSequence apply_lookup(const SpectralSequence& seq, const std::vector<double>& xs,
                              const std::vector<double>& ys, std::size_t* clamped) {
    SpectralSequence out = seq.like();
    std::size_t n_clamped = 0;
    const auto& in = seq.frames();
    auto& dst = out.frames();
    for (size_t i = 0; i < in.size(); ++i) {
        if (in[i] < xs.front() || in[i] > xs.back()) ++n_clamped;
        dst[i] = interp_ascending(xs, ys, in[i]);
    }
    if (clamped) *clamped = n_clamped;
    return out;
}

}  // namespace

SpectralSequence apply_vst(const SpectralSequence& seq, const VstTransform& t,
                           std::size_t* clamped) {
    return apply_lookup(seq, t.u_knots, t.f_knots, clamped);
}

SpectralSequence apply_ivst(const SpectralSequence& seq, const VstTransform& t,
                            std::size_t* clamped) {
    return apply_lookup(seq, t.f_knots, t.u_knots, clamped);
}

}  // namespace bald
