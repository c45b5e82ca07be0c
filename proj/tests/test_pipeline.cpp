#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "bald/eval.hpp"
#include "bald/phantom.hpp"
#include "bald/pipeline.hpp"
#include "helpers.hpp"

using namespace bald;
using bald_test::make_seq;

namespace {

// Separable Gaussian blur (sigma 1, radius 4, replicated edges) as a stand-in
// external denoiser that knows nothing about the noise model.
SpectralSequence gaussian_blur(const SpectralSequence& seq) {
    constexpr int radius = 4;
    double w[2 * radius + 1];
    double norm = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-0.5 * i * i);
        norm += w[i + radius];
    }
    for (double& v : w) v /= norm;

    const int H = seq.height(), W = seq.width();
    SpectralSequence tmp = seq.like(), out = seq.like();
    for (int k = 0; k < seq.n_offsets(); ++k) {
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i)
                    acc += w[i + radius] * seq(k, std::clamp(y + i, 0, H - 1), x);
                tmp.value(k, y, x) = acc;
            }
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i)
                    acc += w[i + radius] * tmp(k, y, std::clamp(x + i, 0, W - 1));
                out.value(k, y, x) = acc;
            }
    }
    return out;
}

}  // namespace

TEST_CASE("bald on a noiseless phantom stays near-perfect") {
    const SpectralSequence clean = generate_phantom();
    const BaldResult res = bald::bald(clean);
    CHECK(psnr(clean, res.denoised) >= 60.0);
}

TEST_CASE("the wiener pass adds measurable value over the hard pass alone") {
    const SpectralSequence clean = generate_phantom();
    const SpectralSequence noisy = add_rician_noise(clean, 0.05, 7);

    // Hard stage only, inside the same stabilization sandwich.
    const NoiseCurve curve = estimate_noise_curve(extract_noise_samples(noisy));
    const VstTransform t = build_vst(curve);
    const SpectralSequence v = apply_vst(noisy, t);
    const SpectralSequence hard_only = apply_ivst(denoise_hard(v, t.sigma_target), t);

    const BaldResult full = bald::bald(noisy);
    CHECK(psnr(clean, full.denoised) > psnr(clean, hard_only));
}

TEST_CASE("bald improves psnr on rician-corrupted phantoms") {
    const SpectralSequence clean = generate_phantom();
    for (double level : {0.02, 0.08}) {
        const SpectralSequence noisy =
            add_rician_noise(clean, level, 1000 + static_cast<std::uint64_t>(level * 1000));
        const BaldResult res = bald::bald(noisy);
        CHECK(psnr(clean, res.denoised, 1.0) > psnr(clean, noisy, 1.0));
    }
}

TEST_CASE("the packaged denoiser equals the hard plus wiener composition") {
    const SpectralSequence clean = generate_phantom();
    const SpectralSequence noisy = add_rician_noise(clean, 0.04, 3);

    const NoiseCurve curve = estimate_noise_curve(extract_noise_samples(noisy));
    const VstTransform t = build_vst(curve);
    const SpectralSequence v = apply_vst(noisy, t);

    PatchConfig cfg;
    cfg.patch_size = 8;
    cfg.stride = 4;
    const SpectralSequence hard = denoise_hard(v, t.sigma_target, cfg);
    const SpectralSequence wiener = denoise_wiener(v, hard, t.sigma_target, cfg);

    const Denoiser packaged = make_svd_denoiser(cfg);
    const SpectralSequence packed = packaged(v, t.sigma_target);
    CHECK(std::memcmp(packed.frames().data(), wiener.frames().data(),
                      packed.frames().size() * sizeof(double)) == 0);
}

TEST_CASE("bald with a curve override skips estimation and reports the override") {
    const SpectralSequence clean = generate_phantom();
    const SpectralSequence noisy = add_rician_noise(clean, 0.05, 21);

    NoiseCurve curve = estimate_noise_curve(extract_noise_samples(noisy));
    for (double& s : curve.sigma) s *= 1.3;  // a deliberately different curve

    const BaldResult res = bald::bald(noisy, {}, &curve);
    CHECK(res.curve.intensity == curve.intensity);
    CHECK(res.curve.sigma == curve.sigma);
    CHECK(res.sigma_target == doctest::Approx(curve.knot_mean()).epsilon(1e-15));
}

TEST_CASE("pipeline parameters are validated") {
    const SpectralSequence clean = generate_phantom();
    const SpectralSequence noisy = add_rician_noise(clean, 0.05, 4);

    BaldParams bad;
    bad.t1 = 1;
    CHECK_THROWS_AS(bald::bald(noisy, bad), ConfigError);

    BaldParams stride_bad;
    stride_bad.stride = 9;  // > patch_size 8
    CHECK_THROWS_AS(bald::bald(noisy, stride_bad), ConfigError);
}

TEST_CASE("wrapping an identity denoiser is a near-identity overall") {
    auto carrier = make_seq(32, 32, 31, [](int k, int y, int x) {
        return 0.01 + 0.5 * (y * 32 + x) / 1023.0 + 0.48 * k / 30.0;
    });
    const SpectralSequence noisy = add_model_noise(carrier, NoiseModelParams{0.02, 0.03, 0.4}, 5);

    const Denoiser identity = [](const SpectralSequence& s, double) { return s; };
    const SpectralSequence out = wrap_denoiser(noisy, identity);

    const NoiseSamples samples = extract_noise_samples(noisy);
    const double span = samples.intensity_max - samples.intensity_min;
    double worst = 0.0;
    for (std::size_t i = 0; i < out.frames().size(); ++i)
        worst = std::max(worst, std::abs(out.frames()[i] - noisy.frames()[i]));
    CHECK(worst <= 1e-6 * span);
}

TEST_CASE("wrapping rejects a shape-changing denoiser") {
    auto carrier = make_seq(16, 16, 11, [](int k, int y, int x) {
        return 0.2 + 0.01 * k + 0.002 * y + 0.001 * x;
    });
    const SpectralSequence noisy = add_model_noise(carrier, NoiseModelParams{0.03, 0.0, 1.0}, 6);

    const Denoiser shrink = [](const SpectralSequence& s, double) {
        return SpectralSequence(s.width() / 2, s.height(), s.offsets_ppm());
    };
    CHECK_THROWS_AS(wrap_denoiser(noisy, shrink), ConfigError);
}

TEST_CASE("stabilization helps even a generic smoother") {
    // A sigma-clipped smoother: blur, then restore any residual that looks
    // like structure (beyond three deviations). It needs one global noise
    // level. Inside the stabilization sandwich that level is exact
    // everywhere; on raw data no single level fits noise that swings 20x
    // with intensity, so the clip leaks noise wherever the level is low.
    auto carrier = make_seq(64, 64, 81, [](int k, int y, int x) {
        return 0.01 + 0.5 * (y * 64 + x) / 4095.0 + 0.48 * k / 80.0;
    });
    const SpectralSequence noisy = add_model_noise(carrier, NoiseModelParams{0.002, 0.05, 0.2}, 2);

    const Denoiser clip = [](const SpectralSequence& s, double sigma) {
        SpectralSequence out = gaussian_blur(s);
        for (std::size_t i = 0; i < out.frames().size(); ++i) {
            const double r = s.frames()[i] - out.frames()[i];
            if (std::abs(r) > 3.0 * sigma) out.frames()[i] += r;
        }
        return out;
    };

    const SpectralSequence wrapped = wrap_denoiser(noisy, clip);

    // Give the raw-domain run the best single level available to it: the
    // knot mean of the blindly estimated curve, the same rule bald uses.
    const NoiseCurve curve = estimate_noise_curve(extract_noise_samples(noisy));
    double level = 0.0;
    for (double sg : curve.sigma) level += sg;
    level /= static_cast<double>(curve.sigma.size());
    const SpectralSequence plain = clip(noisy, level);

    CHECK(psnr(carrier, wrapped, 1.0) > psnr(carrier, plain, 1.0));
}
