#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bald/errors.hpp"

namespace bald {

// A C-offset stack of H x W intensity frames with ppm offsets, an optional
// M0 normalization frame, and an optional boolean foreground mask.
// Frames are stored offset-major, row-major, as IEEE doubles. Library
// operations treat sequences as immutable and return new containers.
class SpectralSequence {
public:
    // Zero-filled sequence. Offsets must be strictly monotone, C >= 3.
    SpectralSequence(int width, int height, std::vector<double> offsets_ppm);

    int width() const { return width_; }
    int height() const { return height_; }
    int n_offsets() const { return n_offsets_; }
    const std::vector<double>& offsets_ppm() const { return offsets_; }

    double operator()(int k, int y, int x) const {
        return frames_[index(k, y, x)];
    }
    double& value(int k, int y, int x) { return frames_[index(k, y, x)]; }

    const std::vector<double>& frames() const { return frames_; }
    std::vector<double>& frames() { return frames_; }
    const double* frame_data(int k) const {
        return frames_.data() + static_cast<size_t>(k) * height_ * width_;
    }

    bool has_m0() const { return !m0_.empty(); }
    double m0(int y, int x) const { return m0_[static_cast<size_t>(y) * width_ + x]; }
    const std::vector<double>& m0_frame() const { return m0_; }
    void set_m0(std::vector<double> m0);

    bool has_mask() const { return !mask_.empty(); }
    // All pixels are foreground when no mask is set.
    bool in_mask(int y, int x) const {
        return mask_.empty() || mask_[static_cast<size_t>(y) * width_ + x] != 0;
    }
    const std::vector<std::uint8_t>& mask_frame() const { return mask_; }
    void set_mask(std::vector<std::uint8_t> mask);

    // New sequence with identical geometry/offsets/m0/mask and zero frames.
    SpectralSequence like() const;

private:
    size_t index(int k, int y, int x) const {
        return (static_cast<size_t>(k) * height_ + y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    int n_offsets_ = 0;
    std::vector<double> offsets_;
    std::vector<double> frames_;
    std::vector<double> m0_;
    std::vector<std::uint8_t> mask_;
};

// Named set of pixel coordinates (row, col); non-empty and in bounds.
struct Roi {
    std::string label;
    std::vector<std::pair<int, int>> pixels;
};

// Divide every frame pixel-wise by M0; the result carries an all-ones M0
// (so the operation is idempotent) and zeroed off-mask pixels.
SpectralSequence normalize_by_m0(const SpectralSequence& seq);

// The C (offset, intensity) pairs at one pixel, in stored offset order.
std::vector<std::pair<double, double>> extract_zspectrum(const SpectralSequence& seq,
                                                         int row, int col);

}  // namespace bald
