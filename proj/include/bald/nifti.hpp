#pragma once

#include <string>
#include <vector>

#include "bald/spectral_sequence.hpp"

namespace bald {

// Minimal single-file NIfTI-1 (.nii, uncompressed) import. The volume's
// slowest axis is taken as the offset axis: 3D data maps (x,y,z) -> frame z,
// 4D data with a singleton z maps (x,y,1,t) -> frame t. Integer types are
// promoted to double and the header scaling (scl_slope/scl_inter) is applied.
// The offset list must be supplied separately; NIfTI has no ppm axis.
SpectralSequence import_nifti(const std::string& path,
                              const std::vector<double>& offsets_ppm);

// Offsets file: decimal numbers separated by commas and/or newlines.
std::vector<double> read_offsets_csv(const std::string& path);

}  // namespace bald
