#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "sma/noise.hpp"
#include "sma/video_io.hpp"

using namespace sma;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("sma_io_test_" + std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Minimal SMAV payload: N=2, C=1, H=1, W=1, values {0.25, 0.75}.
std::string tiny_smav() {
    std::string s = "SMAV";
    auto push_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    push_u32(1); // version
    push_u32(2);
    push_u32(1);
    push_u32(1);
    push_u32(1);
    auto push_f32 = [&](float f) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        push_u32(bits);
    };
    push_f32(0.25f);
    push_f32(0.75f);
    return s;
}

} // namespace

TEST_SUITE("video_io") {

TEST_CASE("decodes a hand-built SMAV file") {
    const auto dir = temp_dir();
    write_bytes(dir / "tiny.smav", tiny_smav());
    const auto v = load_video(dir / "tiny.smav");
    CHECK(v.frames() == 2);
    CHECK(v.channels() == 1);
    CHECK(v.height() == 1);
    CHECK(v.width() == 1);
    CHECK(v.at(0, 0, 0, 0) == 0.25);
    CHECK(v.at(1, 0, 0, 0) == 0.75);
}

TEST_CASE("distinct load errors") {
    const auto dir = temp_dir();
    SUBCASE("bad magic") {
        auto s = tiny_smav();
        s[0] = 'X';
        s[1] = 'X';
        s[2] = 'X';
        s[3] = 'X';
        write_bytes(dir / "bad.smav", s);
        try {
            load_video(dir / "bad.smav");
            FAIL("expected load_error");
        } catch (const load_error& e) {
            CHECK(e.why == load_error::reason::bad_magic);
        }
    }
    SUBCASE("bad version") {
        auto s = tiny_smav();
        s[4] = 2;
        write_bytes(dir / "v2.smav", s);
        try {
            load_video(dir / "v2.smav");
            FAIL("expected load_error");
        } catch (const load_error& e) {
            CHECK(e.why == load_error::reason::bad_version);
        }
    }
    SUBCASE("truncated payload") {
        auto s = tiny_smav();
        s.resize(s.size() - 2);
        write_bytes(dir / "short.smav", s);
        try {
            load_video(dir / "short.smav");
            FAIL("expected load_error");
        } catch (const load_error& e) {
            CHECK(e.why == load_error::reason::truncated);
        }
    }
    SUBCASE("missing file") {
        try {
            load_video(dir / "nope.smav");
            FAIL("expected load_error");
        } catch (const load_error& e) {
            CHECK(e.why == load_error::reason::unreadable);
        }
    }
}

TEST_CASE("round trip is the identity on stored 32-bit values") {
    const auto dir = temp_dir();
    const NoiseStream rng(3);
    VideoTensor v(8, 1, 32, 32, rng.gaussians(0, 0, 8 * 32 * 32));
    save_video(v, dir / "v.smav");
    const auto back = load_video(dir / "v.smav");
    REQUIRE(back.same_shape(v));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const float stored = static_cast<float>(v.values()[i]);
        CHECK(static_cast<float>(back.values()[i]) == stored);
        CHECK(back.values()[i] == static_cast<double>(stored));
    }
    // Saving the reload reproduces the file byte for byte.
    save_video(back, dir / "v2.smav");
    std::ifstream a(dir / "v.smav", std::ios::binary);
    std::ifstream b(dir / "v2.smav", std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
}

TEST_CASE("PGM directory import scales 8-bit values to [0,1]") {
    const auto dir = temp_dir();
    write_bytes(dir / "a_frame0.pgm", std::string("P5\n1 1\n255\n") + '\0');
    write_bytes(dir / "b_frame1.pgm", std::string("P5\n1 1\n255\n") + '\xff');
    const auto v = load_video(dir);
    REQUIRE(v.frames() == 2);
    CHECK(v.at(0, 0, 0, 0) == 0.0);
    CHECK(v.at(1, 0, 0, 0) == 1.0);
}

TEST_CASE("inconsistent PGM dimensions are rejected") {
    const auto dir = temp_dir();
    write_bytes(dir / "f0.pgm", std::string("P5\n1 1\n255\n") + '\0');
    write_bytes(dir / "f1.pgm", std::string("P5\n2 1\n255\n") + "ab");
    try {
        load_video(dir);
        FAIL("expected load_error");
    } catch (const load_error& e) {
        CHECK(e.why == load_error::reason::inconsistent_dims);
    }
}

} // TEST_SUITE
