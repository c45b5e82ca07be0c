#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bald/spectral_sequence.hpp"

namespace bald {

// Declarative description of the synthetic grid phantom: a background of
// water + MT pools everywhere, and a rows x cols grid of disk compartments
// whose APT amplitude scales column-wise and NOE amplitude row-wise.
struct PhantomSpec {
    int width = 64;
    int height = 64;
    double offset_start = -10.0;  // ppm
    double offset_stop = 10.0;    // ppm
    double offset_step = 0.25;    // ppm

    double water_amplitude = 0.80;
    double water_width = 3.0;
    double mt_amplitude = 0.08;
    double mt_width = 20.0;
    double mt_center = -2.5;
    double apt_amplitude = 0.10;  // amplitude at multiplier 1
    double apt_width = 2.0;
    double apt_center = 3.5;
    double noe_amplitude = 0.15;
    double noe_width = 3.0;
    double noe_center = -3.5;

    int grid_rows = 3;
    int grid_cols = 3;
    double disk_radius = 8.0;
    std::vector<double> column_levels{0.0, 0.5, 1.0};  // APT multiplier per column
    std::vector<double> row_levels{0.0, 0.5, 1.0};     // NOE multiplier per row
};

// Load a spec from a JSON key-value document; absent keys keep defaults.
PhantomSpec load_phantom_spec(const std::string& path);

// Clean phantom: per-pixel Lorentzian forward model, M0 of all ones.
SpectralSequence generate_phantom(const PhantomSpec& spec = {});

// Pixels of one grid compartment disk (row, col are grid indices).
std::vector<std::pair<int, int>> compartment_pixels(const PhantomSpec& spec, int row,
                                                    int col);

// Analytic signal-dependent noise families g(u) = a + b * exp(-u / c):
// deviation escalates at low intensity and plateaus at high intensity.
struct NoiseModelParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
};

// Declared parameters for the four model ids 'A'..'D'.
NoiseModelParams noise_model_params(char id);

double noise_sigma(const NoiseModelParams& m, double u);

// Magnitude (Rician) noise: v -> sqrt((v + n1)^2 + n2^2) with n1, n2 drawn
// as Gaussian(0, sigma_n^2) per pixel in offset-major row-major order.
SpectralSequence add_rician_noise(const SpectralSequence& seq, double sigma_n,
                                  std::uint64_t seed);

// Signal-dependent Gaussian noise: v -> v + g(v) * n, one standard normal
// per pixel in offset-major row-major order.
SpectralSequence add_model_noise(const SpectralSequence& seq, const NoiseModelParams& m,
                                 std::uint64_t seed);
SpectralSequence add_model_noise(const SpectralSequence& seq, char id, std::uint64_t seed);

}  // namespace bald
