#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "kgs/snapshot.hpp"
#include "test_util.hpp"

using namespace kgs;

namespace {

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

} // namespace

TEST(Snapshot, RoundTripIsBitwise)
{
    for (int d = 1; d <= 3; ++d) {
        const GridSpec g(d, -1.5, 2.25, 6);
        FieldState s = kgs::test::random_state(g, 77);
        s.p[0] = -0.0;
        s.q[1] = std::numeric_limits<double>::denorm_min();
        s.t = 0.30000000000000004;
        const auto path = temp_file("kgs_roundtrip.kgs");
        write_snapshot(s, g, path);
        EXPECT_EQ(std::filesystem::file_size(path), snapshot_size(g));
        const Snapshot back = read_snapshot(path);
        EXPECT_EQ(back.grid, g);
        EXPECT_EQ(std::memcmp(back.state.p.data(), s.p.data(), 8 * g.size()), 0);
        EXPECT_EQ(back.state, s);
        std::filesystem::remove(path);
    }
}

TEST(Snapshot, SizeFormula)
{
    EXPECT_EQ(snapshot_size(GridSpec(2, 0, 1, 128)), 524328u);
    EXPECT_EQ(snapshot_size(GridSpec(3, 0, 1, 4)), 4u + 12 + 24 + 4 * 64 * 8);
}

TEST(Snapshot, HeaderLayout)
{
    const GridSpec g(2, -10.0, 10.0, 4);
    FieldState s = FieldState::zeros(g);
    s.t = 1.0;
    const auto path = temp_file("kgs_header.kgs");
    write_snapshot(s, g, path);
    std::ifstream in(path, std::ios::binary);
    unsigned char h[40];
    in.read(reinterpret_cast<char*>(h), 40);
    EXPECT_EQ(std::string(reinterpret_cast<char*>(h), 4), "KGS1");
    EXPECT_EQ(h[4], 1);
    EXPECT_EQ(h[8], 2);
    EXPECT_EQ(h[12], 4);
    // 1.0 = 0x3FF0000000000000, little-endian
    EXPECT_EQ(h[38], 0xF0);
    EXPECT_EQ(h[39], 0x3F);
    std::filesystem::remove(path);
}

TEST(Snapshot, ErrorsNamePath)
{
    const GridSpec g(1, 0, 1, 4);
    const auto bad = std::filesystem::path("/nonexistent_dir_kgs/x.kgs");
    try {
        write_snapshot(FieldState::zeros(g), g, bad);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
    }
    const auto junk = temp_file("kgs_junk.kgs");
    std::ofstream(junk) << "not a snapshot at all, but long enough to have a header........";
    EXPECT_THROW(read_snapshot(junk), IoError);
    EXPECT_THROW(read_snapshot(temp_file("kgs_missing.kgs")), IoError);
    std::filesystem::remove(junk);
}

TEST(Snapshot, TruncatedFileRejected)
{
    const GridSpec g(2, 0, 1, 4);
    const auto path = temp_file("kgs_trunc.kgs");
    write_snapshot(FieldState::zeros(g), g, path);
    std::filesystem::resize_file(path, snapshot_size(g) - 8);
    EXPECT_THROW(read_snapshot(path), IoError);
    std::filesystem::remove(path);
}
