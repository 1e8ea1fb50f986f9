#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "cvef/field.hpp"

namespace cvef {

/// Binary field snapshot.  Layout (all integers little-endian):
///   magic "CVEF" | u32 version (currently 1) | u32 n | f64 box_len |
///   u32 field_count | field_count x (u32 name_len | UTF-8 name) |
///   field_count x (n^3 f64 samples, y3-fastest row-major).
struct Snapshot {
    Grid grid;
    std::vector<std::string> names;
    std::vector<std::vector<double>> fields;  // one n^3 block per name
};

namespace detail {

inline void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace detail

inline void write_snapshot(const std::string& path, const Snapshot& snap) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "snapshot: cannot open '" + path + "' for writing");
    out.write("CVEF", 4);
    detail::put_u32(out, 1);
    detail::put_u32(out, static_cast<std::uint32_t>(snap.grid.n()));
    detail::put_f64(out, snap.grid.box_len());
    detail::put_u32(out, static_cast<std::uint32_t>(snap.names.size()));
    for (const auto& name : snap.names) {
        detail::put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    const std::size_t count = snap.grid.site_count();
    for (const auto& field : snap.fields) {
        if (field.size() != count)
            throw Error(ErrorKind::dimension_mismatch, "snapshot: field size mismatch");
        for (double v : field) detail::put_f64(out, v);
    }
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "snapshot: cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "CVEF", 4) != 0)
        throw Error(ErrorKind::io, "snapshot: bad magic (not a CVEF file)");
    const std::uint32_t version = detail::get_u32(in);
    if (version != 1)
        throw Error(ErrorKind::io,
                    "snapshot: unsupported format version " + std::to_string(version));
    const std::uint32_t n = detail::get_u32(in);
    const double box = detail::get_f64(in);
    Snapshot snap;
    snap.grid = Grid(static_cast<int>(n), box);
    const std::uint32_t field_count = detail::get_u32(in);
    snap.names.resize(field_count);
    for (auto& name : snap.names) {
        const std::uint32_t len = detail::get_u32(in);
        name.resize(len);
        in.read(name.data(), len);
    }
    const std::size_t count = snap.grid.site_count();
    snap.fields.resize(field_count);
    for (auto& field : snap.fields) {
        field.resize(count);
        for (auto& v : field) v = detail::get_f64(in);
    }
    if (!in) throw Error(ErrorKind::io, "snapshot: truncated file");
    return snap;
}

/// Physical state snapshot with the conventional six field names.
inline Snapshot make_state_snapshot(const VectorField& eta, const VectorField& u) {
    require_same_grid(eta.grid(), u.grid(), "make_state_snapshot");
    Snapshot snap;
    snap.grid = eta.grid();
    const char* names[6] = {"eta_1", "eta_2", "eta_3", "u_1", "u_2", "u_3"};
    const std::size_t count = snap.grid.site_count();
    for (int c = 0; c < 3; ++c) {
        snap.names.emplace_back(names[c]);
        snap.fields.emplace_back(eta.component(c), eta.component(c) + count);
    }
    for (int c = 0; c < 3; ++c) {
        snap.names.emplace_back(names[3 + c]);
        snap.fields.emplace_back(u.component(c), u.component(c) + count);
    }
    return snap;
}

}  // namespace cvef
