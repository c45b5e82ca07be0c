#include "bald/container.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "bald/errors.hpp"

namespace bald {

namespace {

constexpr char kMagic[8] = {'B', 'A', 'L', 'D', 'S', 'E', 'Q', '1'};

// Compose multi-byte values explicitly little-endian so files are portable
// across host byte orders.
void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xffu));
    out.push_back(static_cast<char>((v >> 8) & 0xffu));
    out.push_back(static_cast<char>((v >> 16) & 0xffu));
    out.push_back(static_cast<char>((v >> 24) & 0xffu));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void validate_container(const ContainerData& data) {
    if (data.c <= 0 || data.h <= 0 || data.w <= 0)
        throw DataError("container dimensions must be positive");
    const std::size_t expect =
        static_cast<std::size_t>(data.c) * static_cast<std::size_t>(data.h) *
        static_cast<std::size_t>(data.w);
    if (data.payload.size() != expect)
        throw DataError("container payload size does not match dimensions");
    if (data.axis.size() != static_cast<std::size_t>(data.c))
        throw DataError("container axis length does not match frame count");
    if (!data.frame_names.empty() &&
        data.frame_names.size() != static_cast<std::size_t>(data.c))
        throw DataError("container frame-name list does not match frame count");
}

}  // namespace

void write_container(const std::string& path, const ContainerData& data) {
    validate_container(data);

    nlohmann::json sidecar;
    sidecar["format"] = "bald-container";
    sidecar["version"] = 1;
    sidecar["dims"] = {{"c", data.c}, {"h", data.h}, {"w", data.w}};
    sidecar["axis"] = data.axis;
    sidecar["dtype"] = "float32";
    sidecar["endianness"] = "little";
    sidecar["provenance"] = data.provenance.is_null() ? nlohmann::json::object()
                                                      : data.provenance;
    if (!data.frame_names.empty()) sidecar["frame_names"] = data.frame_names;

    // nlohmann::json stores objects ordered by key, so dump() is canonical
    // for a given logical content; that is what makes equal runs bit-exact.
    const std::string json_text = sidecar.dump();
    if (json_text.size() > std::numeric_limits<std::uint32_t>::max())
        throw DataError("container sidecar too large");

    std::string blob;
    blob.reserve(sizeof(kMagic) + 4 + json_text.size() + data.payload.size() * 4);
    blob.append(kMagic, sizeof(kMagic));
    put_u32_le(blob, static_cast<std::uint32_t>(json_text.size()));
    blob.append(json_text);
    for (float f : data.payload) put_u32_le(blob, std::bit_cast<std::uint32_t>(f));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    out.flush();
    if (!out) throw IoError("short write: " + path);
}

ContainerData read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure: " + path);

    if (blob.size() < sizeof(kMagic) + 4 ||
        std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0)
        throw DataError("not a bald container: " + path);

    const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
    const std::uint32_t json_len = get_u32_le(bytes + sizeof(kMagic));
    const std::size_t payload_off = sizeof(kMagic) + 4 + static_cast<std::size_t>(json_len);
    if (payload_off > blob.size())
        throw DataError("truncated container sidecar: " + path);

    nlohmann::json sidecar;
    try {
        sidecar = nlohmann::json::parse(blob.begin() + sizeof(kMagic) + 4,
                                        blob.begin() + static_cast<std::ptrdiff_t>(payload_off));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed container sidecar: ") + e.what());
    }

    ContainerData data;
    try {
        if (sidecar.at("format").get<std::string>() != "bald-container")
            throw DataError("unrecognized container format tag");
        if (sidecar.at("dtype").get<std::string>() != "float32")
            throw DataError("unsupported container dtype");
        if (sidecar.at("endianness").get<std::string>() != "little")
            throw DataError("unsupported container endianness");
        const auto& dims = sidecar.at("dims");
        data.c = dims.at("c").get<int>();
        data.h = dims.at("h").get<int>();
        data.w = dims.at("w").get<int>();
        data.axis = sidecar.at("axis").get<std::vector<double>>();
        data.provenance = sidecar.value("provenance", nlohmann::json::object());
        if (sidecar.contains("frame_names"))
            data.frame_names = sidecar.at("frame_names").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid container sidecar: ") + e.what());
    }

    if (data.c <= 0 || data.h <= 0 || data.w <= 0)
        throw DataError("container dimensions must be positive: " + path);
    const std::size_t n =
        static_cast<std::size_t>(data.c) * static_cast<std::size_t>(data.h) *
        static_cast<std::size_t>(data.w);
    if (blob.size() - payload_off != n * 4)
        throw DataError("container payload size does not match dimensions: " + path);

    data.payload.resize(n);
    const unsigned char* p = bytes + payload_off;
    for (std::size_t i = 0; i < n; ++i, p += 4)
        data.payload[i] = std::bit_cast<float>(get_u32_le(p));

    validate_container(data);
    return data;
}

ContainerData to_container(const SpectralSequence& seq, nlohmann::json provenance) {
    ContainerData data;
    data.c = seq.n_offsets();
    data.h = seq.height();
    data.w = seq.width();
    data.axis = seq.offsets_ppm();
    data.provenance = std::move(provenance);
    const auto& frames = seq.frames();
    data.payload.resize(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i)
        data.payload[i] = static_cast<float>(frames[i]);
    return data;
}

SpectralSequence sequence_from_container(const ContainerData& data) {
    validate_container(data);
    SpectralSequence seq(data.w, data.h, data.axis);
    auto& frames = seq.frames();
    for (std::size_t i = 0; i < data.payload.size(); ++i)
        frames[i] = static_cast<double>(data.payload[i]);
    return seq;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw InternalError("number formatting failed");
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, const std::string& context) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw DataError("malformed number '" + field + "' in " + context);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void write_noise_curve_csv(const std::string& path, const NoiseCurve& curve) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "intensity,sigma\n";
    for (std::size_t i = 0; i < curve.intensity.size(); ++i)
        out << format_double(curve.intensity[i]) << ',' << format_double(curve.sigma[i])
            << '\n';
    out.flush();
    if (!out) throw IoError("short write: " + path);
}

NoiseCurve read_noise_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty noise-curve file: " + path);
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "intensity" || header[1] != "sigma")
        throw DataError("noise-curve header must be 'intensity,sigma': " + path);

    NoiseCurve curve;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw DataError("noise-curve rows must have two fields: " + path);
        curve.intensity.push_back(parse_double(fields[0], path));
        curve.sigma.push_back(parse_double(fields[1], path));
    }
    if (curve.intensity.size() < 2)
        throw DataError("noise curve needs at least two knots: " + path);
    for (std::size_t i = 1; i < curve.intensity.size(); ++i)
        if (!(curve.intensity[i] > curve.intensity[i - 1]))
            throw DataError("noise-curve knots must be strictly increasing: " + path);
    for (double s : curve.sigma)
        if (!(s > 0.0)) throw DataError("noise-curve sigma values must be positive: " + path);
    curve.intensity_min = curve.intensity.front();
    curve.intensity_max = curve.intensity.back();
    curve.t1 = 0;  // unknown for imported curves
    curve.t2 = static_cast<int>(curve.intensity.size());
    return curve;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, double>>& metrics) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "metric,value\n";
    for (const auto& [name, value] : metrics)
        out << name << ',' << format_double(value) << '\n';
    out.flush();
    if (!out) throw IoError("short write: " + path);
}

void write_roi_stats_csv(const std::string& path, const std::vector<RoiStats>& stats) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "roi,n,mean,std,q1,q2,q3\n";
    for (const auto& s : stats)
        out << s.label << ',' << s.n << ',' << format_double(s.mean) << ','
            << format_double(s.stddev) << ',' << format_double(s.q1) << ','
            << format_double(s.q2) << ',' << format_double(s.q3) << '\n';
    out.flush();
    if (!out) throw IoError("short write: " + path);
}

}  // namespace bald
