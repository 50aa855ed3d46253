#include "sma/video_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace sma {

namespace {

constexpr char kMagic[4] = {'S', 'M', 'A', 'V'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t read_u32le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in)
        throw load_error(load_error::reason::truncated, "truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

float read_f32le(std::istream& in, bool& ok) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) {
        ok = false;
        return 0.0f;
    }
    std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                         (static_cast<std::uint32_t>(b[1]) << 8) |
                         (static_cast<std::uint32_t>(b[2]) << 16) |
                         (static_cast<std::uint32_t>(b[3]) << 24);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

void write_f32le(std::ostream& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    write_u32le(out, bits);
}

VideoTensor load_smav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw load_error(load_error::reason::unreadable,
                         "cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw load_error(load_error::reason::bad_magic,
                         path.string() + ": not an SMAV file (bad magic)");
    const std::uint32_t version = read_u32le(in);
    if (version != kVersion)
        throw load_error(load_error::reason::bad_version,
                         path.string() + ": unsupported SMAV version " +
                             std::to_string(version));
    const std::uint64_t n = read_u32le(in);
    const std::uint64_t c = read_u32le(in);
    const std::uint64_t h = read_u32le(in);
    const std::uint64_t w = read_u32le(in);
    if (n < 2 || c < 1 || h < 1 || w < 1)
        throw load_error(load_error::reason::inconsistent_dims,
                         path.string() + ": invalid dimensions in header");
    const std::uint64_t count = n * c * h * w;
    std::vector<double> values(count);
    bool ok = true;
    for (std::uint64_t i = 0; i < count; ++i) {
        values[i] = static_cast<double>(read_f32le(in, ok));
        if (!ok)
            throw load_error(load_error::reason::truncated,
                             path.string() + ": truncated payload");
    }
    for (double v : values) {
        if (!std::isfinite(v))
            throw load_error(load_error::reason::non_finite,
                             path.string() + ": non-finite payload value");
    }
    return VideoTensor(n, c, h, w, std::move(values));
}

// Reads one token from a PGM header, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int ch = in.get();
    while (in) {
        if (ch == '#') {
            while (in && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    while (in && !std::isspace(ch)) {
        tok.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    return tok;
}

void load_pgm_frame(const std::filesystem::path& path, std::vector<double>& out,
                    std::size_t& h, std::size_t& w, bool first) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw load_error(load_error::reason::unreadable,
                         "cannot open " + path.string());
    if (pgm_token(in) != "P5")
        throw load_error(load_error::reason::bad_pgm,
                         path.string() + ": not a binary PGM (expected P5)");
    std::size_t fw = 0, fh = 0, maxval = 0;
    try {
        fw = std::stoul(pgm_token(in));
        fh = std::stoul(pgm_token(in));
        maxval = std::stoul(pgm_token(in));
    } catch (const std::exception&) {
        throw load_error(load_error::reason::bad_pgm,
                         path.string() + ": malformed PGM header");
    }
    if (fw == 0 || fh == 0)
        throw load_error(load_error::reason::bad_pgm,
                         path.string() + ": zero PGM dimensions");
    if (maxval != 255)
        throw load_error(load_error::reason::bad_pgm,
                         path.string() + ": only 8-bit PGM supported (maxval 255)");
    if (first) {
        h = fh;
        w = fw;
    } else if (fh != h || fw != w) {
        throw load_error(load_error::reason::inconsistent_dims,
                         path.string() + ": frame dimensions differ from first frame");
    }
    std::vector<unsigned char> row(fw);
    for (std::size_t y = 0; y < fh; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(fw));
        if (!in)
            throw load_error(load_error::reason::truncated,
                             path.string() + ": truncated PGM payload");
        for (std::size_t x = 0; x < fw; ++x)
            out.push_back(static_cast<double>(row[x]) / 255.0);
    }
}

VideoTensor load_pgm_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".pgm")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.size() < 2)
        throw load_error(load_error::reason::inconsistent_dims,
                         dir.string() + ": need at least 2 PGM frames");
    std::vector<double> values;
    std::size_t h = 0, w = 0;
    for (std::size_t i = 0; i < files.size(); ++i)
        load_pgm_frame(files[i], values, h, w, i == 0);
    return VideoTensor(files.size(), 1, h, w, std::move(values));
}

} // namespace

VideoTensor load_video(const std::filesystem::path& path) {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec))
        return load_pgm_dir(path);
    if (!std::filesystem::exists(path, ec))
        throw load_error(load_error::reason::unreadable,
                         path.string() + ": no such file");
    return load_smav(path);
}

void save_video(const VideoTensor& v, const std::filesystem::path& path) {
    if (v.frames() < 2)
        throw value_error("save_video: video needs at least 2 frames");
    v.ensure_finite("save_video");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot open " + path.string() + " for writing");
    out.write(kMagic, 4);
    write_u32le(out, kVersion);
    write_u32le(out, static_cast<std::uint32_t>(v.frames()));
    write_u32le(out, static_cast<std::uint32_t>(v.channels()));
    write_u32le(out, static_cast<std::uint32_t>(v.height()));
    write_u32le(out, static_cast<std::uint32_t>(v.width()));
    for (double d : v.values()) write_f32le(out, static_cast<float>(d));
    out.flush();
    if (!out)
        throw io_error("write failed for " + path.string());
}

} // namespace sma
