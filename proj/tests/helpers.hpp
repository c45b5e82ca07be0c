#pragma once

#include <vector>

#include "bald/spectral_sequence.hpp"

namespace bald_test {

inline std::vector<double> linear_offsets(int c, double start = -2.0, double step = 0.5) {
    std::vector<double> offs(c);
    for (int k = 0; k < c; ++k) offs[k] = start + step * k;
    return offs;
}

// Build a sequence from a value function fn(k, y, x) -> double.
template <typename Fn>
bald::SpectralSequence make_seq(int width, int height, int c, Fn&& fn,
                                double start = -2.0, double step = 0.5) {
    bald::SpectralSequence seq(width, height, linear_offsets(c, start, step));
    for (int k = 0; k < c; ++k)
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) seq.value(k, y, x) = fn(k, y, x);
    return seq;
}

}  // namespace bald_test
