#pragma once

// Periodic-box discretization of R^n, n in {1,2,3}. The box is [-L, L)^n with
// N points per axis, spacing h = 2L/N, and frequency lattice xi_k = pi*k/L for
// signed k in {-N/2, ..., N/2-1}. Frequency-space arrays use FFTW mode order.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fhnls {

inline constexpr double kPi = 3.14159265358979323846;

struct Grid {
    int dim = 1;
    int points = 8;           // N, even, per axis
    double half_length = 1.0; // L

    double spacing() const { return 2.0 * half_length / points; }
    double freq_step() const { return kPi / half_length; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(points);
        return s;
    }
    double cell_volume() const { return std::pow(spacing(), dim); }
    double box_volume() const { return std::pow(2.0 * half_length, dim); }

    double position(int j) const { return -half_length + j * spacing(); }
    int signed_mode(int k) const { return k < points / 2 ? k : k - points; }
    double frequency(int k) const { return freq_step() * signed_mode(k); }

    std::vector<int> fft_dims() const { return std::vector<int>(dim, points); }

    bool operator==(const Grid&) const = default;
};

inline Grid build_grid(int dim, int points_per_axis, double half_length) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
    if (points_per_axis < 8) throw std::invalid_argument("grid: N must be >= 8");
    if (points_per_axis % 2 != 0) throw std::invalid_argument("grid: N must be even");
    if (!(half_length > 0.0)) throw std::invalid_argument("grid: L must be positive");
    return Grid{dim, points_per_axis, half_length};
}

// Visits every lattice site in row-major order; fn(flat, idx) receives the
// flat index and the per-axis indices (idx[a] valid for a < dim).
template <typename Fn>
inline void for_each_site(const Grid& g, Fn&& fn) {
    std::array<int, 3> idx{0, 0, 0};
    const std::size_t n = g.size();
    for (std::size_t flat = 0; flat < n; ++flat) {
        fn(flat, idx);
        for (int a = g.dim - 1; a >= 0; --a) {
            if (++idx[a] < g.points) break;
            idx[a] = 0;
        }
    }
}

// |xi|^2 at the frequency site given by per-axis FFTW indices.
inline double freq_norm_sq(const Grid& g, const std::array<int, 3>& idx) {
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const double xi = g.frequency(idx[a]);
        s += xi * xi;
    }
    return s;
}

// |x|^2 at the physical site.
inline double pos_norm_sq(const Grid& g, const std::array<int, 3>& idx) {
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const double x = g.position(idx[a]);
        s += x * x;
    }
    return s;
}

}  // namespace fhnls
