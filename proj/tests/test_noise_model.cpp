#include <doctest.h>

#include <cmath>
#include <vector>

#include "bald/noise_model.hpp"
#include "bald/phantom.hpp"
#include "bald/rng.hpp"
#include "helpers.hpp"

using namespace bald;
using bald_test::make_seq;

namespace {

constexpr double kSqrt6 = 2.4494897427831780982;

// Small textured carrier: spatial ramp plus a per-frame lift, values well
// inside (0, 1).
SpectralSequence ramp_carrier(int w = 32, int h = 32, int c = 31) {
    const int hw = h * w;
    return make_seq(w, h, c, [&](int k, int y, int x) {
        const int i = y * w + x;
        return 0.01 + 0.5 * i / (hw - 1) + 0.48 * k / (c - 1);
    });
}

}  // namespace

TEST_CASE("noise samples are interior-frame second differences over sqrt 6") {
    SpectralSequence seq(1, 1, {0.0, 1.0, 2.0, 3.0});
    seq.value(0, 0, 0) = 1.0;
    seq.value(1, 0, 0) = 1.6;
    seq.value(2, 0, 0) = 1.3;
    seq.value(3, 0, 0) = 9.0;

    const NoiseSamples s = extract_noise_samples(seq);
    REQUIRE(s.intensity.size() == 2);  // interior frames k = 1, 2
    REQUIRE(s.intensity[0].size() == 1);
    CHECK(s.intensity[0][0] == 1.6);
    CHECK(s.intensity[1][0] == 1.3);
    CHECK(s.noise[0][0] == doctest::Approx((2 * 1.6 - 1.0 - 1.3) / kSqrt6).epsilon(1e-15));
    CHECK(s.noise[1][0] == doctest::Approx((2 * 1.3 - 1.6 - 9.0) / kSqrt6).epsilon(1e-15));
    // The intensity range covers every frame, including non-interior ones.
    CHECK(s.intensity_min == 1.0);
    CHECK(s.intensity_max == 9.0);
}

TEST_CASE("noise extraction respects the mask") {
    auto seq = make_seq(2, 1, 4, [](int k, int, int x) { return x ? 100.0 + k : 1.0 * k; });
    seq.set_mask({1, 0});
    const NoiseSamples s = extract_noise_samples(seq);
    CHECK(s.intensity_max == 3.0);  // pixel 1 is invisible
    CHECK(s.intensity[0].size() == 1);

    seq.set_mask({0, 0});
    CHECK_THROWS_AS(extract_noise_samples(seq), DataError);
}

TEST_CASE("curve estimation on a hand-computed two-bin case") {
    // Two pixels, four frames. Perturbations on the interior frames give
    // exactly one sample per (frame, bin).
    SpectralSequence seq(2, 1, {0.0, 1.0, 2.0, 3.0});
    auto set = [&](int k, int x, double v) { seq.value(k, 0, x) = v; };
    set(0, 0, 0.0);  set(1, 0, 0.6);   set(2, 0, 0.3);   set(3, 0, 0.0);
    set(0, 1, 10.0); set(1, 1, 8.8);   set(2, 1, 10.9);  set(3, 1, 10.0);

    const NoiseSamples s = extract_noise_samples(seq);
    CHECK(s.intensity_min == 0.0);
    CHECK(s.intensity_max == 10.9);

    const NoiseCurve curve = estimate_noise_curve(s, 2, 2);
    // Frame 1 bin RMS: pixel0 |2*0.6-0-0.3|/sqrt6, pixel1 |2*(-1.2)-0-0.9|/sqrt6.
    // Frame 2 bin RMS: pixel0 0, pixel1 |2*0.9+1.2-0|/sqrt6. Median of two
    // values is their mean.
    const double bin0 = 0.5 * (0.9 / kSqrt6 + 0.0);
    const double bin1 = 0.5 * (3.3 / kSqrt6 + 3.0 / kSqrt6);
    REQUIRE(curve.intensity.size() == 2);
    CHECK(curve.intensity[0] == 0.0);
    CHECK(curve.intensity[1] == 10.9);
    CHECK(curve.sigma[0] == doctest::Approx(bin0).epsilon(1e-14));
    CHECK(curve.sigma[1] == doctest::Approx(bin1).epsilon(1e-14));
    REQUIRE(curve.bin_counts.size() == 2);
    CHECK(curve.bin_counts[0] == 2);
    CHECK(curve.bin_counts[1] == 2);

    // Resampling to three knots interpolates between the two bin centers.
    const NoiseCurve three = estimate_noise_curve(s, 2, 3);
    CHECK(three.intensity[1] == doctest::Approx(5.45).epsilon(1e-14));
    CHECK(three.sigma[1] == doctest::Approx(0.5 * (bin0 + bin1)).epsilon(1e-14));
    // Knot queries clamp outside the knot span and interpolate inside it.
    CHECK(curve.value_at(-5.0) == doctest::Approx(bin0).epsilon(1e-14));
    CHECK(curve.value_at(20.0) == doctest::Approx(bin1).epsilon(1e-14));
    CHECK(curve.knot_mean() == doctest::Approx(0.5 * (bin0 + bin1)).epsilon(1e-14));
}

TEST_CASE("empty bins inherit the nearest valid bin value") {
    // The last frame stretches the global range to 5, but every sample's
    // own intensity stays below 2.5, leaving the upper bin empty.
    SpectralSequence seq(1, 1, {0.0, 1.0, 2.0, 3.0});
    seq.value(0, 0, 0) = 0.0;
    seq.value(1, 0, 0) = 0.2;
    seq.value(2, 0, 0) = 0.1;
    seq.value(3, 0, 0) = 5.0;

    const NoiseCurve curve = estimate_noise_curve(extract_noise_samples(seq), 2, 2);
    const double bin0 = 0.5 * (0.3 / kSqrt6 + 5.0 / kSqrt6);
    CHECK(curve.sigma[0] == doctest::Approx(bin0).epsilon(1e-14));
    CHECK(curve.sigma[1] == doctest::Approx(bin0).epsilon(1e-14));  // filled
    CHECK(curve.bin_counts[0] == 2);
    CHECK(curve.bin_counts[1] == 0);
}

TEST_CASE("curve estimation validates its parameters") {
    auto seq = make_seq(4, 4, 5, [](int k, int y, int x) { return k + 0.1 * y + 0.01 * x; });
    const NoiseSamples s = extract_noise_samples(seq);
    CHECK_THROWS_AS(estimate_noise_curve(s, 1, 10), ConfigError);
    CHECK_THROWS_AS(estimate_noise_curve(s, 0, 10), ConfigError);
    CHECK_THROWS_AS(estimate_noise_curve(s, 10, 9), ConfigError);
}

TEST_CASE("an exactly noise-free sequence fails estimation loudly") {
    // Constant: every second difference is zero, every bin under the floor.
    auto seq = make_seq(4, 4, 5, [](int, int, int) { return 0.7; });
    CHECK_THROWS_AS(estimate_noise_curve(extract_noise_samples(seq)), EstimationError);
}

TEST_CASE("second differences of iid noise recover its deviation") {
    // Flat carrier + iid Gaussian: pooled sample std of the noise samples
    // matches the injected deviation closely (they are unbiased for iid).
    const double sigma = 0.05;
    const NoiseModelParams flat{sigma, 0.0, 1.0};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto clean = make_seq(64, 64, 31, [](int, int, int) { return 0.5; });
        const SpectralSequence noisy = add_model_noise(clean, flat, seed);
        const NoiseSamples s = extract_noise_samples(noisy);
        double sq = 0.0;
        std::size_t n = 0;
        for (const auto& frame : s.noise) {
            for (double d : frame) sq += d * d;
            n += frame.size();
        }
        const double rms = std::sqrt(sq / static_cast<double>(n));
        CHECK(std::abs(rms - sigma) / sigma < 0.05);
    }
}

TEST_CASE("the median merge shrugs off one corrupted frame") {
    const SpectralSequence noisy =
        add_model_noise(ramp_carrier(), NoiseModelParams{0.05, 0.0, 1.0}, 9);
    NoiseSamples s = extract_noise_samples(noisy);
    const NoiseCurve before = estimate_noise_curve(s);

    for (double& d : s.noise[5]) d *= 10.0;  // one frame goes wild
    const NoiseCurve after = estimate_noise_curve(s);

    // The carrier sweeps half the intensity range per frame, so mid-range
    // bins pool most frames and their medians barely move, while edge bins
    // draw on a handful of frames and may shift by one order statistic.
    const double lo = before.intensity_min +
                      0.35 * (before.intensity_max - before.intensity_min);
    const double hi = before.intensity_min +
                      0.65 * (before.intensity_max - before.intensity_min);
    double worst_mid = 0.0, worst_all = 0.0;
    for (std::size_t j = 0; j < before.sigma.size(); ++j) {
        const double change =
            std::abs(after.value_at(before.intensity[j]) - before.sigma[j]) /
            before.sigma[j];
        worst_all = std::max(worst_all, change);
        if (before.intensity[j] >= lo && before.intensity[j] <= hi)
            worst_mid = std::max(worst_mid, change);
    }
    CHECK(worst_mid < 0.05);
    CHECK(worst_all < 0.5);  // a mean merge would inflate sparse bins ~2.5x
}

TEST_CASE("a constant noise curve builds an identity-shaped transform") {
    NoiseCurve curve;
    curve.intensity = {2.0, 2.5, 3.0, 3.5, 4.0};
    curve.sigma = std::vector<double>(5, 0.07);
    curve.intensity_min = 2.0;
    curve.intensity_max = 4.0;

    const VstTransform t = build_vst(curve);
    CHECK(t.sigma_target == doctest::Approx(0.07).epsilon(1e-15));
    // f(u) = u - umin when sigma is constant.
    CHECK(t.forward(2.0) == 0.0);
    CHECK(t.forward(3.3) == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(t.inverse(t.forward(3.7)) == doctest::Approx(3.7).epsilon(1e-12));
}

TEST_CASE("vst roundtrip is the identity within a sliver of the range") {
    const SpectralSequence noisy =
        add_model_noise(ramp_carrier(), NoiseModelParams{0.01, 0.05, 0.3}, 4);
    const NoiseCurve curve = estimate_noise_curve(extract_noise_samples(noisy));
    const VstTransform t = build_vst(curve);

    const double span = curve.intensity_max - curve.intensity_min;
    std::size_t clamped_fwd = 0, clamped_inv = 0;
    const SpectralSequence v = apply_vst(noisy, t, &clamped_fwd);
    const SpectralSequence back = apply_ivst(v, t, &clamped_inv);
    CHECK(clamped_fwd == 0);  // estimation range covers the data by design
    CHECK(clamped_inv == 0);

    double worst = 0.0;
    for (std::size_t i = 0; i < back.frames().size(); ++i)
        worst = std::max(worst, std::abs(back.frames()[i] - noisy.frames()[i]));
    CHECK(worst <= 1e-6 * span);
}

TEST_CASE("lookup application counts clamped pixels") {
    NoiseCurve curve;
    curve.intensity = {0.0, 1.0};
    curve.sigma = {0.1, 0.1};
    const VstTransform t = build_vst(curve);

    auto seq = make_seq(2, 1, 3, [](int k, int, int x) { return k == 1 && x == 0 ? 1.5 : 0.5; });
    std::size_t clamped = 0;
    const SpectralSequence v = apply_vst(seq, t, &clamped);
    CHECK(clamped == 1);
    CHECK(v(1, 0, 0) == 1.0);  // clamped to the top knot's value
    CHECK(v(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}
