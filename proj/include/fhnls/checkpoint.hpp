#pragma once

// Binary checkpoint: magic "FHNLS001", little-endian header (u32 version,
// u8 dim, u32 N per axis, f64 L, f64 t, f64 dt, f64 m, f64 alpha, f64 gamma,
// i8 lambda), then N^n interleaved (re, im) f64 pairs in row-major order.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fhnls/field.hpp"

namespace fhnls {

struct Checkpoint {
    std::uint32_t version = 1;
    ComplexField u;
    double t = 0.0;
    double dt = 0.0;
    double m = 0.0;
    double alpha = 2.0;
    double gamma = 1.0;
    std::int8_t lambda = -1;
};

namespace detail {

template <typename T>
void write_raw(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    if (ck.u.space != Space::physical)
        throw std::invalid_argument("checkpoint: field must be physical space");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    out.write("FHNLS001", 8);
    detail::write_raw(out, ck.version);
    detail::write_raw(out, static_cast<std::uint8_t>(ck.u.grid.dim));
    detail::write_raw(out, static_cast<std::uint32_t>(ck.u.grid.points));
    detail::write_raw(out, ck.u.grid.half_length);
    detail::write_raw(out, ck.t);
    detail::write_raw(out, ck.dt);
    detail::write_raw(out, ck.m);
    detail::write_raw(out, ck.alpha);
    detail::write_raw(out, ck.gamma);
    detail::write_raw(out, ck.lambda);
    for (const cplx& v : ck.u.values) {
        detail::write_raw(out, v.real());
        detail::write_raw(out, v.imag());
    }
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "FHNLS001", 8) != 0)
        throw std::runtime_error("checkpoint: bad magic: " + path);
    Checkpoint ck;
    std::uint8_t dim = 0;
    std::uint32_t points = 0;
    double L = 0.0;
    detail::read_raw(in, ck.version);
    detail::read_raw(in, dim);
    detail::read_raw(in, points);
    detail::read_raw(in, L);
    detail::read_raw(in, ck.t);
    detail::read_raw(in, ck.dt);
    detail::read_raw(in, ck.m);
    detail::read_raw(in, ck.alpha);
    detail::read_raw(in, ck.gamma);
    detail::read_raw(in, ck.lambda);
    ck.u.grid = build_grid(dim, static_cast<int>(points), L);
    ck.u.space = Space::physical;
    ck.u.values.resize(ck.u.grid.size());
    for (cplx& v : ck.u.values) {
        double re, im;
        detail::read_raw(in, re);
        detail::read_raw(in, im);
        v = cplx(re, im);
    }
    if (!in) throw std::runtime_error("checkpoint: truncated file: " + path);
    return ck;
}

}  // namespace fhnls
