#include "bald/spectral_sequence.hpp"

#include <cmath>

namespace bald {

SpectralSequence::SpectralSequence(int width, int height, std::vector<double> offsets_ppm)
    : width_(width),
      height_(height),
      n_offsets_(static_cast<int>(offsets_ppm.size())),
      offsets_(std::move(offsets_ppm)) {
    if (width_ <= 0 || height_ <= 0)
        throw ConfigError("sequence dimensions must be positive");
    if (n_offsets_ < 3)
        throw ConfigError("sequence needs at least 3 offsets, got " +
                          std::to_string(n_offsets_));
    const bool ascending = offsets_[1] > offsets_[0];
    for (int k = 1; k < n_offsets_; ++k) {
        const double d = offsets_[k] - offsets_[k - 1];
        if (!(ascending ? d > 0 : d < 0))
            throw ConfigError("offsets must be strictly monotone without duplicates");
    }
    frames_.assign(static_cast<size_t>(n_offsets_) * height_ * width_, 0.0);
}

void SpectralSequence::set_m0(std::vector<double> m0) {
    if (m0.size() != static_cast<size_t>(height_) * width_)
        throw ConfigError("m0 frame size does not match sequence dimensions");
    m0_ = std::move(m0);
}

void SpectralSequence::set_mask(std::vector<std::uint8_t> mask) {
    if (mask.size() != static_cast<size_t>(height_) * width_)
        throw ConfigError("mask size does not match sequence dimensions");
    mask_ = std::move(mask);
}

SpectralSequence SpectralSequence::like() const {
    SpectralSequence out(width_, height_, offsets_);
    out.m0_ = m0_;
    out.mask_ = mask_;
    return out;
}

SpectralSequence normalize_by_m0(const SpectralSequence& seq) {
    if (!seq.has_m0())
        throw ConfigError("normalize_by_m0 requires an M0 frame");

    // Validate M0 positivity on the foreground before touching any data.
    size_t bad = 0;
    for (int y = 0; y < seq.height(); ++y)
        for (int x = 0; x < seq.width(); ++x)
            if (seq.in_mask(y, x) && !(seq.m0(y, x) > 0.0)) ++bad;
    if (bad > 0)
        throw DataError("normalize_by_m0: " + std::to_string(bad) +
                        " nonpositive M0 pixel(s) inside mask");

    SpectralSequence out = seq.like();
    for (int k = 0; k < seq.n_offsets(); ++k)
        for (int y = 0; y < seq.height(); ++y)
            for (int x = 0; x < seq.width(); ++x)
                out.value(k, y, x) =
                    seq.in_mask(y, x) ? seq(k, y, x) / seq.m0(y, x) : 0.0;
    out.set_m0(std::vector<double>(static_cast<size_t>(seq.height()) * seq.width(), 1.0));
    return out;
}

std::vector<std::pair<double, double>> extract_zspectrum(const SpectralSequence& seq,
                                                         int row, int col) {
    if (row < 0 || row >= seq.height() || col < 0 || col >= seq.width())
        throw ConfigError("extract_zspectrum: coordinate (" + std::to_string(row) + ", " +
                          std::to_string(col) + ") out of bounds");
    std::vector<std::pair<double, double>> out;
    out.reserve(seq.n_offsets());
    for (int k = 0; k < seq.n_offsets(); ++k)
        out.emplace_back(seq.offsets_ppm()[k], seq(k, row, col));
    return out;
}

}  // namespace bald
