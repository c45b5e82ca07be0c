#include "bald/pipeline.hpp"

namespace bald {

Denoiser make_svd_denoiser(const PatchConfig& cfg) {
    return [cfg](const SpectralSequence& seq, double sigma) {
        const SpectralSequence oracle = denoise_hard(seq, sigma, cfg);
        return denoise_wiener(seq, oracle, sigma, cfg);
    };
}

namespace {

PatchConfig to_patch_config(const BaldParams& params) {
    PatchConfig cfg;
    cfg.patch_size = params.patch_size;
    cfg.stride = params.stride >= 1 ? params.stride : std::max(1, params.patch_size / 2);
    cfg.threads = params.threads;
    return cfg;
}

}  // namespace

BaldResult bald(const SpectralSequence& seq, const BaldParams& params,
                const NoiseCurve* curve_override) {
    NoiseCurve curve;
    if (curve_override != nullptr) {
        curve = *curve_override;
    } else {
        curve = estimate_noise_curve(extract_noise_samples(seq), params.t1, params.t2);
    }
    const VstTransform vst = build_vst(curve);
    const SpectralSequence stabilized = apply_vst(seq, vst);
    const Denoiser denoiser = make_svd_denoiser(to_patch_config(params));
    const SpectralSequence denoised = denoiser(stabilized, vst.sigma_target);
    return BaldResult{apply_ivst(denoised, vst), std::move(curve), vst.sigma_target};
}

SpectralSequence wrap_denoiser(const SpectralSequence& seq, const Denoiser& external,
                               int t1, int t2) {
    const NoiseCurve curve = estimate_noise_curve(extract_noise_samples(seq), t1, t2);
    const VstTransform vst = build_vst(curve);
    const SpectralSequence stabilized = apply_vst(seq, vst);
    const SpectralSequence denoised = external(stabilized, vst.sigma_target);
    if (denoised.n_offsets() != seq.n_offsets() || denoised.height() != seq.height() ||
        denoised.width() != seq.width())
        throw ConfigError("external denoiser changed the sequence shape");
    return apply_ivst(denoised, vst);
}

}  // namespace bald
