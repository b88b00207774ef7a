#pragma once

// Binary snapshot format (all multi-byte values little-endian):
//
//   offset  size      content
//   0       4         magic "KGS1"
//   4       4         u32 version = 1
//   8       4         u32 dimension
//   12      4         u32 N
//   16      8         f64 a
//   24      8         f64 b
//   32      8         f64 t
//   40      8*N^d     P, then Q, U, V (same size each), repo linear index order
//
// File size = 40 + 32 * N^d bytes.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/grid.hpp"

namespace kgs {

inline constexpr std::uint32_t snapshot_version = 1;

inline std::size_t snapshot_size(const GridSpec& grid) { return 4 + 4 * 3 + 8 * 3 + 4 * grid.size() * 8; }

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t x)
{
    for (int k = 0; k < 4; ++k)
        out.push_back(static_cast<unsigned char>(x >> (8 * k)));
}

inline void put_f64(std::vector<unsigned char>& out, double d)
{
    const auto x = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k)
        out.push_back(static_cast<unsigned char>(x >> (8 * k)));
}

inline std::uint32_t get_u32(const unsigned char* in)
{
    std::uint32_t x = 0;
    for (int k = 0; k < 4; ++k)
        x |= static_cast<std::uint32_t>(in[k]) << (8 * k);
    return x;
}

inline double get_f64(const unsigned char* in)
{
    std::uint64_t x = 0;
    for (int k = 0; k < 8; ++k)
        x |= static_cast<std::uint64_t>(in[k]) << (8 * k);
    return std::bit_cast<double>(x);
}

} // namespace detail

inline void write_snapshot(const FieldState& state, const GridSpec& grid, const std::filesystem::path& path)
{
    detail::require_state(grid, state);
    std::vector<unsigned char> buf;
    buf.reserve(snapshot_size(grid));
    buf.insert(buf.end(), {'K', 'G', 'S', '1'});
    detail::put_u32(buf, snapshot_version);
    detail::put_u32(buf, static_cast<std::uint32_t>(grid.dim()));
    detail::put_u32(buf, static_cast<std::uint32_t>(grid.n()));
    detail::put_f64(buf, grid.a());
    detail::put_f64(buf, grid.b());
    detail::put_f64(buf, state.t);
    for (const Field* f : {&state.p, &state.q, &state.u, &state.v})
        for (double x : *f)
            detail::put_f64(buf, x);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open snapshot for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw IoError("failed writing snapshot: " + path.string());
}

struct Snapshot {
    GridSpec grid;
    FieldState state;
};

inline Snapshot read_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open snapshot: " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 40 || std::memcmp(buf.data(), "KGS1", 4) != 0)
        throw IoError("not a KGS1 snapshot: " + path.string());
    if (detail::get_u32(buf.data() + 4) != snapshot_version)
        throw IoError("unsupported snapshot version in " + path.string());
    const int dim = static_cast<int>(detail::get_u32(buf.data() + 8));
    const std::size_t n = detail::get_u32(buf.data() + 12);
    const double a = detail::get_f64(buf.data() + 16);
    const double b = detail::get_f64(buf.data() + 24);
    GridSpec grid(dim, a, b, n);
    if (buf.size() != snapshot_size(grid))
        throw IoError("snapshot size mismatch in " + path.string());

    FieldState state;
    state.t = detail::get_f64(buf.data() + 32);
    const unsigned char* cursor = buf.data() + 40;
    for (Field* f : {&state.p, &state.q, &state.u, &state.v}) {
        f->resize(grid.size());
        for (double& x : *f) {
            x = detail::get_f64(cursor);
            cursor += 8;
        }
    }
    return {grid, std::move(state)};
}

} // namespace kgs
