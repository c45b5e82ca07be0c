#pragma once

#include <string>
#include <vector>

#include "bald/spectral_sequence.hpp"

namespace bald {

// Peak signal-to-noise ratio in dB over the reference mask. peak <= 0 uses
// the reference maximum (over the mask). Identical inputs return +infinity.
double psnr(const SpectralSequence& reference, const SpectralSequence& test,
            double peak = 0.0);

// Same metric over raw value arrays (no mask); used for generic containers.
double psnr(const std::vector<double>& reference, const std::vector<double>& test,
            double peak = 0.0);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

// Two-sided Welch unequal-variance t-test with Welch-Satterthwaite degrees
// of freedom.
WelchResult welch_t_test_full(const std::vector<double>& a, const std::vector<double>& b);
double welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta function I_x(a, b), exposed for verification.
double ibeta_reg(double a, double b, double x);

struct RoiStats {
    std::string label;
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n - 1)
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
};

// Summary of map values inside an ROI; quartiles by linear interpolation
// between order statistics. Requires n >= 2.
RoiStats roi_stats(const std::vector<double>& map_values, int width, int height,
                   const Roi& roi);

}  // namespace bald
