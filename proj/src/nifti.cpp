#include "bald/nifti.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bald/errors.hpp"

namespace bald {

namespace {

// NIfTI-1 datatype codes.
constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtInt32 = 8;
constexpr std::int16_t kDtFloat32 = 16;
constexpr std::int16_t kDtFloat64 = 64;

template <typename T>
T load_le(const unsigned char* p, bool swap) {
    static_assert(sizeof(T) <= 8);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        const std::size_t src = swap ? sizeof(T) - 1 - i : i;
        v |= static_cast<std::uint64_t>(p[src]) << (8 * i);
    }
    if constexpr (sizeof(T) == 1)
        return std::bit_cast<T>(static_cast<std::uint8_t>(v));
    else if constexpr (sizeof(T) == 2)
        return std::bit_cast<T>(static_cast<std::uint16_t>(v));
    else if constexpr (sizeof(T) == 4)
        return std::bit_cast<T>(static_cast<std::uint32_t>(v));
    else
        return std::bit_cast<T>(v);
}

struct NiftiHeader {
    std::int16_t dim[8];
    std::int16_t datatype;
    std::int16_t bitpix;
    float vox_offset;
    float scl_slope;
    float scl_inter;
    bool swap;
};

NiftiHeader parse_header(const std::string& blob, const std::string& path) {
    if (blob.size() < 352) throw DataError("file too small for a NIfTI-1 header: " + path);
    const auto* b = reinterpret_cast<const unsigned char*>(blob.data());

    // NIfTI files written on the opposite-endian host have a byte-swapped
    // header; sizeof_hdr == 348 tells us which orientation we are reading.
    bool swap = false;
    if (load_le<std::int32_t>(b, false) != 348) {
        if (load_le<std::int32_t>(b, true) != 348)
            throw DataError("not a NIfTI-1 file (bad header size): " + path);
        swap = true;
    }

    if (std::memcmp(blob.data() + 344, "n+1", 4) != 0) {
        if (std::memcmp(blob.data() + 344, "ni1", 4) == 0)
            throw DataError("two-file NIfTI pairs are not supported; use single-file .nii: " +
                            path);
        throw DataError("not a NIfTI-1 file (bad magic): " + path);
    }

    NiftiHeader hdr{};
    hdr.swap = swap;
    for (int i = 0; i < 8; ++i) hdr.dim[i] = load_le<std::int16_t>(b + 40 + 2 * i, swap);
    hdr.datatype = load_le<std::int16_t>(b + 70, swap);
    hdr.bitpix = load_le<std::int16_t>(b + 72, swap);
    hdr.vox_offset = load_le<float>(b + 108, swap);
    hdr.scl_slope = load_le<float>(b + 112, swap);
    hdr.scl_inter = load_le<float>(b + 116, swap);
    return hdr;
}

}  // namespace

SpectralSequence import_nifti(const std::string& path,
                              const std::vector<double>& offsets_ppm) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure: " + path);

    const NiftiHeader hdr = parse_header(blob, path);
    const int ndim = hdr.dim[0];
    if (ndim < 3 || ndim > 4)
        throw DataError("expected a 3D or 4D NIfTI volume: " + path);
    const int nx = hdr.dim[1];
    const int ny = hdr.dim[2];
    const int nz = hdr.dim[3];
    const int nt = ndim == 4 ? hdr.dim[4] : 1;
    if (nx <= 0 || ny <= 0 || nz <= 0 || nt <= 0)
        throw DataError("nonpositive NIfTI dimension: " + path);

    // Single-slice sequences store offsets along z (3D) or t with nz == 1 (4D).
    int n_frames;
    if (ndim == 3) {
        n_frames = nz;
    } else if (nz == 1) {
        n_frames = nt;
    } else {
        throw DataError("4D NIfTI import requires a singleton z dimension: " + path);
    }
    if (static_cast<std::size_t>(n_frames) != offsets_ppm.size())
        throw ConfigError("offset list length " + std::to_string(offsets_ppm.size()) +
                          " does not match NIfTI frame count " + std::to_string(n_frames));

    int bytes_per = 0;
    switch (hdr.datatype) {
        case kDtUint8: bytes_per = 1; break;
        case kDtInt16: bytes_per = 2; break;
        case kDtInt32: bytes_per = 4; break;
        case kDtFloat32: bytes_per = 4; break;
        case kDtFloat64: bytes_per = 8; break;
        default:
            throw DataError("unsupported NIfTI datatype code " +
                            std::to_string(hdr.datatype) + ": " + path);
    }
    if (hdr.bitpix != 8 * bytes_per)
        throw DataError("NIfTI bitpix inconsistent with datatype: " + path);

    const std::size_t n_vox = static_cast<std::size_t>(nx) * ny * n_frames;
    const auto data_off = static_cast<std::size_t>(hdr.vox_offset);
    if (hdr.vox_offset < 352.0f || data_off + n_vox * bytes_per > blob.size())
        throw DataError("truncated NIfTI payload: " + path);

    const double slope = hdr.scl_slope != 0.0f ? hdr.scl_slope : 1.0;
    const double inter = hdr.scl_slope != 0.0f ? hdr.scl_inter : 0.0;

    SpectralSequence seq(nx, ny, offsets_ppm);
    const auto* p = reinterpret_cast<const unsigned char*>(blob.data()) + data_off;
    // NIfTI stores x fastest, then y, then the frame axis; that maps directly
    // onto frame/row/column order.
    for (int k = 0; k < n_frames; ++k)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                const std::size_t i = static_cast<std::size_t>(x) +
                                      static_cast<std::size_t>(nx) *
                                          (static_cast<std::size_t>(y) +
                                           static_cast<std::size_t>(ny) * k);
                double raw;
                switch (hdr.datatype) {
                    case kDtUint8: raw = load_le<std::uint8_t>(p + i, false); break;
                    case kDtInt16: raw = load_le<std::int16_t>(p + 2 * i, hdr.swap); break;
                    case kDtInt32: raw = load_le<std::int32_t>(p + 4 * i, hdr.swap); break;
                    case kDtFloat32: raw = load_le<float>(p + 4 * i, hdr.swap); break;
                    default: raw = load_le<double>(p + 8 * i, hdr.swap); break;
                }
                seq.value(k, y, x) = slope * raw + inter;
            }
    return seq;
}

std::vector<double> read_offsets_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure: " + path);

    std::vector<double> offsets;
    std::string cur;
    auto flush = [&]() {
        // Trim surrounding whitespace, then require a full-token parse.
        std::size_t a = cur.find_first_not_of(" \t");
        std::size_t b = cur.find_last_not_of(" \t");
        if (a == std::string::npos) {
            cur.clear();
            return;
        }
        const std::string tok = cur.substr(a, b - a + 1);
        double v = 0.0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            throw DataError("malformed offset '" + tok + "' in " + path);
        offsets.push_back(v);
        cur.clear();
    };
    for (char ch : blob) {
        if (ch == ',' || ch == '\n' || ch == '\r')
            flush();
        else
            cur.push_back(ch);
    }
    flush();
    if (offsets.empty()) throw DataError("no offsets found in " + path);
    return offsets;
}

}  // namespace bald
