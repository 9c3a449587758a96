#pragma once

// Spectral transforms scaled to the continuum convention
//     u_hat(xi) = integral e^{-i x.xi} u(x) dx,
//     u(x)     = (2pi)^-n integral e^{+i x.xi} u_hat(xi) dxi,
// realized as Riemann sums on the periodic box: the forward transform carries
// the cell volume h^n, the inverse carries (2pi)^-n times the frequency cell
// volume = (2L)^-n. Because the box starts at -L rather than 0, each mode
// picks up the phase (-1)^{k1+...+kn} relative to the raw DFT.
//
// DispersionSymbol holds the real Fourier multipliers for the fractional
// operators: (m^2+|xi|^2)^{s/2}, |xi|^s, the zero-shifted relativistic symbol
// and its nonrelativistic quadratic approximation.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhnls/fft.hpp"
#include "fhnls/field.hpp"
#include "fhnls/grid.hpp"

namespace fhnls {

namespace detail {
// (-1)^{sum of mode indices}; valid because N is even, so signed and raw
// indices share parity.
template <typename Fn>
inline void for_each_mode_sign(const Grid& g, Fn&& fn) {
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        int parity = 0;
        for (int a = 0; a < g.dim; ++a) parity += idx[a];
        fn(flat, (parity & 1) ? -1.0 : 1.0);
    });
}
}  // namespace detail

inline ComplexField transform(const ComplexField& u) {
    if (u.space != Space::physical)
        throw std::invalid_argument("transform: field already in frequency space");
    ComplexField out = u;
    detail::dft_inplace(out.values.data(), u.grid.fft_dims(), -1);
    const double scale = u.grid.cell_volume();
    detail::for_each_mode_sign(u.grid, [&](std::size_t flat, double sign) {
        out.values[flat] *= sign * scale;
    });
    out.space = Space::frequency;
    return out;
}

inline ComplexField inverse_transform(const ComplexField& u) {
    if (u.space != Space::frequency)
        throw std::invalid_argument("inverse_transform: field not in frequency space");
    ComplexField out = u;
    detail::for_each_mode_sign(u.grid, [&](std::size_t flat, double sign) {
        out.values[flat] *= sign;
    });
    detail::dft_inplace(out.values.data(), u.grid.fft_dims(), +1);
    const double scale = 1.0 / u.grid.box_volume();
    for (cplx& v : out.values) v *= scale;
    out.space = Space::physical;
    return out;
}

struct DispersionSymbol {
    enum class Kind { relativistic, homogeneous, shifted_relativistic, nonrelativistic };

    Kind kind = Kind::relativistic;
    double mass = 0.0;
    double exponent = 2.0; // s or alpha
    Grid grid;
    std::vector<double> multiplier; // over the frequency lattice, FFTW order

    static DispersionSymbol relativistic(const Grid& g, double m, double s) {
        if (m < 0.0) throw std::invalid_argument("symbol: mass must be >= 0");
        DispersionSymbol sym{Kind::relativistic, m, s, g, {}};
        sym.multiplier = build(g, [&](double xi2) {
            return std::pow(m * m + xi2, 0.5 * s);
        });
        return sym;
    }

    // |xi|^s with the xi = 0 multiplier set to 0 (acts on the mean-zero part;
    // s = 0 degenerates to the identity).
    static DispersionSymbol homogeneous(const Grid& g, double s) {
        DispersionSymbol sym{Kind::homogeneous, 0.0, s, g, {}};
        sym.multiplier = build(g, [&](double xi2) {
            if (s == 0.0) return 1.0;
            if (xi2 == 0.0) return 0.0;
            return std::pow(xi2, 0.5 * s);
        });
        return sym;
    }

    // (m^2+|xi|^2)^{alpha/2} - m^alpha, exactly 0 at xi = 0.
    static DispersionSymbol shifted_relativistic(const Grid& g, double m, double alpha) {
        if (m < 0.0) throw std::invalid_argument("symbol: mass must be >= 0");
        DispersionSymbol sym{Kind::shifted_relativistic, m, alpha, g, {}};
        const double shift = std::pow(m, alpha);
        sym.multiplier = build(g, [&](double xi2) {
            return std::pow(m * m + xi2, 0.5 * alpha) - shift;
        });
        return sym;
    }

    // alpha/(2 m^{2-alpha}) |xi|^2, the effective symbol in the m -> infinity
    // regime.
    static DispersionSymbol nonrelativistic(const Grid& g, double m, double alpha) {
        if (!(m > 0.0)) throw std::invalid_argument("symbol: nonrelativistic needs m > 0");
        DispersionSymbol sym{Kind::nonrelativistic, m, alpha, g, {}};
        const double coeff = 0.5 * alpha / std::pow(m, 2.0 - alpha);
        sym.multiplier = build(g, [&](double xi2) { return coeff * xi2; });
        return sym;
    }

private:
    template <typename Fn>
    static std::vector<double> build(const Grid& g, Fn&& fn) {
        std::vector<double> mult(g.size());
        for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
            mult[flat] = fn(freq_norm_sq(g, idx));
        });
        return mult;
    }
};

// Applies the Fourier multiplier; linear in the field, output space matches
// the input space.
inline ComplexField apply_symbol(const ComplexField& u, const DispersionSymbol& sym) {
    require_same_grid(u.grid, sym.grid);
    if (u.space == Space::frequency) {
        ComplexField out = u;
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= sym.multiplier[i];
        return out;
    }
    ComplexField hat = transform(u);
    for (std::size_t i = 0; i < hat.values.size(); ++i) hat.values[i] *= sym.multiplier[i];
    return inverse_transform(hat);
}

enum class SobolevVariant { homogeneous, inhomogeneous, massive };

// ||u|| with weight |xi|^{2s}, (1+|xi|^2)^s or (m^2+|xi|^2)^s on |u_hat|^2,
// evaluated by Parseval. For the homogeneous variant the xi = 0 mode is
// excluded (any sign of s).
inline double sobolev_norm(const ComplexField& u, double s,
                           SobolevVariant variant = SobolevVariant::inhomogeneous,
                           double m = 0.0) {
    ComplexField hat = u.space == Space::frequency ? u : transform(u);
    double acc = 0.0;
    for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
        const double xi2 = freq_norm_sq(u.grid, idx);
        double w = 0.0;
        switch (variant) {
            case SobolevVariant::homogeneous:
                w = (s == 0.0) ? 1.0 : (xi2 == 0.0 ? 0.0 : std::pow(xi2, s));
                break;
            case SobolevVariant::inhomogeneous:
                w = std::pow(1.0 + xi2, s);
                break;
            case SobolevVariant::massive:
                w = std::pow(m * m + xi2, s);
                break;
        }
        acc += w * std::norm(hat.values[flat]);
    });
    return std::sqrt(acc / u.grid.box_volume());
}

// Spectral partial derivative d/dx_a; output space matches the input.
inline ComplexField spectral_derivative(const ComplexField& u, int axis) {
    ComplexField hat = u.space == Space::frequency ? u : transform(u);
    for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
        hat.values[flat] *= cplx(0.0, u.grid.frequency(idx[axis]));
    });
    return u.space == Space::frequency ? hat : inverse_transform(hat);
}

}  // namespace fhnls
