#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bald/eval.hpp"
#include "bald/noise_model.hpp"
#include "bald/spectral_sequence.hpp"

namespace bald {

// On-disk container: 8-byte magic "BALDSEQ1", a little-endian uint32 sidecar
// length, the sidecar JSON (UTF-8, keys serialized in sorted order, no
// timestamps), then the payload of c*h*w little-endian IEEE float32 values
// in offset-major, row-major order. Round-trips are bit-exact.
//
// ContainerData is deliberately looser than SpectralSequence: the axis tags
// are arbitrary doubles, so the same format carries spectral sequences
// (ppm offsets) and stacks of named maps (index tags).
struct ContainerData {
    int c = 0;
    int h = 0;
    int w = 0;
    std::vector<double> axis;      // length c
    std::vector<float> payload;    // c * h * w values
    nlohmann::json provenance;     // free-form metadata block
    std::vector<std::string> frame_names;  // optional, for map stacks
};

void write_container(const std::string& path, const ContainerData& data);
ContainerData read_container(const std::string& path);

// Sequence <-> container conversion. Doubles are narrowed to float32 on
// conversion to a container; reading promotes back to double.
ContainerData to_container(const SpectralSequence& seq, nlohmann::json provenance);
SpectralSequence sequence_from_container(const ContainerData& data);

// Locale-independent shortest-round-trip decimal formatting.
std::string format_double(double v);

// CSV schemas.
void write_noise_curve_csv(const std::string& path, const NoiseCurve& curve);
NoiseCurve read_noise_curve_csv(const std::string& path);
void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, double>>& metrics);
void write_roi_stats_csv(const std::string& path, const std::vector<RoiStats>& stats);

}  // namespace bald
