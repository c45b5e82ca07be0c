#include "bald/phantom.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bald/rng.hpp"

namespace bald {

namespace {

double lorentz(double x, double center, double width) {
    const double q = width * width / 4.0;
    const double d = x - center;
    return q / (q + d * d);
}

void validate_spec(const PhantomSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0)
        throw ConfigError("phantom dimensions must be positive");
    if (!(spec.offset_step > 0.0) || spec.offset_stop <= spec.offset_start)
        throw ConfigError("phantom offset grid is empty");
    if (spec.grid_rows <= 0 || spec.grid_cols <= 0 || spec.disk_radius <= 0.0)
        throw ConfigError("phantom grid layout invalid");
    if (static_cast<int>(spec.column_levels.size()) != spec.grid_cols ||
        static_cast<int>(spec.row_levels.size()) != spec.grid_rows)
        throw ConfigError("phantom level lists must match the grid shape");
    for (double v : {spec.water_amplitude, spec.mt_amplitude, spec.apt_amplitude,
                     spec.noe_amplitude})
        if (v < 0.0) throw ConfigError("pool amplitudes must be nonnegative");
    for (double v : spec.column_levels)
        if (v < 0.0) throw ConfigError("column levels must be nonnegative");
    for (double v : spec.row_levels)
        if (v < 0.0) throw ConfigError("row levels must be nonnegative");
    // Compartments must stay disjoint: grid pitch of at least one diameter.
    const double pitch_y = static_cast<double>(spec.height) / spec.grid_rows;
    const double pitch_x = static_cast<double>(spec.width) / spec.grid_cols;
    if (std::min(pitch_y, pitch_x) < 2.0 * spec.disk_radius)
        throw ConfigError("phantom compartments overlap; shrink the disk radius");
}

double grid_center(int index, int count, int extent) {
    return std::round((index + 0.5) * static_cast<double>(extent) / count);
}

}  // namespace

PhantomSpec load_phantom_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open phantom spec '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("phantom spec '" + path + "': " + e.what());
    }

    PhantomSpec spec;
    const auto get = [&doc](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).template get<std::decay_t<decltype(field)>>();
    };
    get("width", spec.width);
    get("height", spec.height);
    get("offset_start", spec.offset_start);
    get("offset_stop", spec.offset_stop);
    get("offset_step", spec.offset_step);
    get("water_amplitude", spec.water_amplitude);
    get("water_width", spec.water_width);
    get("mt_amplitude", spec.mt_amplitude);
    get("mt_width", spec.mt_width);
    get("mt_center", spec.mt_center);
    get("apt_amplitude", spec.apt_amplitude);
    get("apt_width", spec.apt_width);
    get("apt_center", spec.apt_center);
    get("noe_amplitude", spec.noe_amplitude);
    get("noe_width", spec.noe_width);
    get("noe_center", spec.noe_center);
    get("grid_rows", spec.grid_rows);
    get("grid_cols", spec.grid_cols);
    get("disk_radius", spec.disk_radius);
    get("column_levels", spec.column_levels);
    get("row_levels", spec.row_levels);
    validate_spec(spec);
    return spec;
}

SpectralSequence generate_phantom(const PhantomSpec& spec) {
    validate_spec(spec);
    const int C =
        static_cast<int>(std::llround((spec.offset_stop - spec.offset_start) /
                                      spec.offset_step)) + 1;
    std::vector<double> offsets(C);
    for (int k = 0; k < C; ++k) offsets[k] = spec.offset_start + k * spec.offset_step;

    SpectralSequence seq(spec.width, spec.height, offsets);

    // Background spectrum shared by every pixel: water + MT dips.
    std::vector<double> base(C);
    for (int k = 0; k < C; ++k)
        base[k] = 1.0 - spec.water_amplitude * lorentz(offsets[k], 0.0, spec.water_width) -
                  spec.mt_amplitude * lorentz(offsets[k], spec.mt_center, spec.mt_width);
    for (int k = 0; k < C; ++k)
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) seq.value(k, y, x) = base[k];

    // Compartment disks subtract column-scaled APT and row-scaled NOE dips.
    for (int ri = 0; ri < spec.grid_rows; ++ri)
        for (int ci = 0; ci < spec.grid_cols; ++ci) {
            const double apt_level = spec.column_levels[ci];
            const double noe_level = spec.row_levels[ri];
            if (apt_level == 0.0 && noe_level == 0.0) continue;
            for (const auto& [y, x] : compartment_pixels(spec, ri, ci))
                for (int k = 0; k < C; ++k)
                    seq.value(k, y, x) -=
                        apt_level * spec.apt_amplitude *
                            lorentz(offsets[k], spec.apt_center, spec.apt_width) +
                        noe_level * spec.noe_amplitude *
                            lorentz(offsets[k], spec.noe_center, spec.noe_width);
        }

    seq.set_m0(std::vector<double>(static_cast<size_t>(spec.height) * spec.width, 1.0));
    return seq;
}

std::vector<std::pair<int, int>> compartment_pixels(const PhantomSpec& spec, int row,
                                                    int col) {
    if (row < 0 || row >= spec.grid_rows || col < 0 || col >= spec.grid_cols)
        throw ConfigError("compartment index out of range");
    const double cy = grid_center(row, spec.grid_rows, spec.height);
    const double cx = grid_center(col, spec.grid_cols, spec.width);
    const double r2 = spec.disk_radius * spec.disk_radius;
    std::vector<std::pair<int, int>> pixels;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r2) pixels.emplace_back(y, x);
    return pixels;
}

NoiseModelParams noise_model_params(char id) {
    // Declared analytic families; scale-separated with mild shape diversity.
    switch (id) {
        case 'A': return {0.00510, 0.01326, 0.55};
        case 'B': return {0.00773, 0.01469, 0.36};
        case 'C': return {0.00749, 0.01723, 0.44};
        case 'D': return {0.00645, 0.01871, 0.65};
        default:
            throw ConfigError(std::string("unknown noise model id '") + id +
                              "' (expected A-D)");
    }
}

double noise_sigma(const NoiseModelParams& m, double u) {
    return m.a + m.b * std::exp(-u / m.c);
}

SpectralSequence add_rician_noise(const SpectralSequence& seq, double sigma_n,
                                  std::uint64_t seed) {
    if (!(sigma_n > 0.0)) throw ConfigError("rician sigma must be positive");
    SpectralSequence out = seq.like();
    Rng rng(seed);
    const auto& in = seq.frames();
    auto& dst = out.frames();
    for (size_t i = 0; i < in.size(); ++i) {
        const double n1 = rng.normal();
        const double n2 = rng.normal();
        const double re = in[i] + sigma_n * n1;
        const double im = sigma_n * n2;
        dst[i] = std::sqrt(re * re + im * im);
    }
    return out;
}

SpectralSequence add_model_noise(const SpectralSequence& seq, const NoiseModelParams& m,
                                 std::uint64_t seed) {
    SpectralSequence out = seq.like();
    Rng rng(seed);
    const auto& in = seq.frames();
    auto& dst = out.frames();
    for (size_t i = 0; i < in.size(); ++i)
        dst[i] = in[i] + noise_sigma(m, in[i]) * rng.normal();
    return out;
}

SpectralSequence add_model_noise(const SpectralSequence& seq, char id, std::uint64_t seed) {
    return add_model_noise(seq, noise_model_params(id), seed);
}

}  // namespace bald
