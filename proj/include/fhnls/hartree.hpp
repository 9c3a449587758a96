#pragma once

// Hartree interaction: the kernel psi(|x|)/|x|^gamma sampled on a 2x
// zero-padded lattice, the potential K_gamma(|u|^2) as a linear (non-circular)
// convolution, the nonlinearity F(u) = lambda K_gamma(|u|^2) u and the
// potential energy V(u) = (lambda/4) <K_gamma(|u|^2) |u|^2>.
//
// The cell containing x = 0 receives the exact cell average of the kernel,
// computed by dyadic corner quadrature: the integral of psi(|x|)/|x|^gamma
// over [0,a]^n is split into an L-shaped smooth shell (tensor Gauss-Legendre)
// plus a geometrically shrinking corner box, recursed until the remainder,
// closed under psi ~ psi(0), is negligible. gamma < n makes this converge.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhnls/fft.hpp"
#include "fhnls/field.hpp"
#include "fhnls/grid.hpp"

namespace fhnls {

// Radial profile psi: identically 1 or a sampled table with linear
// interpolation, clamped to the last sample beyond the table end. The
// derivative table is optional and used only by virial diagnostics.
struct RadialProfile {
    bool is_one = true;
    std::vector<double> rho;    // strictly increasing, rho[0] == 0
    std::vector<double> value;  // psi(rho) >= 0
    std::vector<double> deriv;  // optional psi'(rho), same length when present

    double operator()(double r) const {
        if (is_one) return 1.0;
        return interp(rho, value, r);
    }

    bool has_derivative() const { return !is_one && !deriv.empty(); }

    double derivative(double r) const {
        if (is_one) return 0.0;
        if (deriv.empty()) throw std::logic_error("psi table has no derivative column");
        return interp(rho, deriv, r);
    }

    double sup() const {
        if (is_one) return 1.0;
        double m = 0.0;
        for (double v : value) m = std::max(m, v);
        return m;
    }

private:
    static double interp(const std::vector<double>& xs, const std::vector<double>& ys,
                         double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + t * (ys[i] - ys[i - 1]);
    }
};

// Loads a psi table from CSV columns (rho, psi) or (rho, psi, psi').
inline RadialProfile load_psi_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open psi table: " + path);
    RadialProfile p;
    p.is_one = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        double r, v;
        if (!(ss >> r >> v)) continue;
        if (!p.rho.empty() && r <= p.rho.back())
            throw std::runtime_error("psi table: rho must be strictly increasing");
        if (v < 0.0) throw std::runtime_error("psi table: negative sample");
        p.rho.push_back(r);
        p.value.push_back(v);
        double d;
        if (ss >> d) p.deriv.push_back(d);
    }
    if (p.rho.empty() || p.rho.front() != 0.0)
        throw std::runtime_error("psi table: must start at rho = 0");
    if (!p.deriv.empty() && p.deriv.size() != p.rho.size())
        throw std::runtime_error("psi table: ragged derivative column");
    return p;
}

struct PotentialSpec {
    double gamma = 0.5;
    int lambda = -1; // +1 defocusing, -1 focusing
    RadialProfile psi;

    void validate(int dim) const {
        if (!(gamma > 0.0) || gamma >= dim)
            throw std::invalid_argument("potential: gamma must satisfy 0 < gamma < n");
        if (lambda != 1 && lambda != -1)
            throw std::invalid_argument("potential: lambda must be +1 or -1");
    }
};

namespace detail {

// Nodes/weights of 16-point Gauss-Legendre on [0,1].
struct GaussLegendre16 {
    std::array<double, 16> x{}, w{};
    GaussLegendre16() {
        // Roots on [-1,1], positive half; mirrored below.
        static const double r[8] = {0.0950125098376374, 0.2816035507792589,
                                    0.4580167776572274, 0.6178762444026438,
                                    0.7554044083550030, 0.8656312023878318,
                                    0.9445750230732326, 0.9894009349916499};
        static const double ww[8] = {0.1894506104550685, 0.1826034150449236,
                                     0.1691565193950025, 0.1495959888165767,
                                     0.1246289712555339, 0.0951585116824928,
                                     0.0622535239386479, 0.0271524594117541};
        for (int i = 0; i < 8; ++i) {
            x[2 * i] = 0.5 * (1.0 - r[i]);
            x[2 * i + 1] = 0.5 * (1.0 + r[i]);
            w[2 * i] = 0.5 * ww[i];
            w[2 * i + 1] = 0.5 * ww[i];
        }
    }
};

inline const GaussLegendre16& gl16() {
    static GaussLegendre16 g;
    return g;
}

// Tensor Gauss-Legendre integral of psi(|x|)/|x|^gamma over the box
// [lo, lo+len]^axis-wise (n dims); the box must not touch the origin.
inline double box_integral(int n, const std::array<double, 3>& lo,
                           const std::array<double, 3>& len, double gamma,
                           const RadialProfile& psi) {
    const auto& g = gl16();
    double total = 0.0;
    std::array<int, 3> q{0, 0, 0};
    const int npts = static_cast<int>(std::pow(16, n));
    for (int flat = 0; flat < npts; ++flat) {
        double wgt = 1.0, r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double xa = lo[a] + len[a] * g.x[q[a]];
            wgt *= len[a] * g.w[q[a]];
            r2 += xa * xa;
        }
        const double r = std::sqrt(r2);
        total += wgt * psi(r) * std::pow(r, -gamma);
        for (int a = n - 1; a >= 0; --a) {
            if (++q[a] < 16) break;
            q[a] = 0;
        }
    }
    return total;
}

// integral of |x|^{-gamma} over [0,1]^n in closed geometric-series form:
// J = S / (1 - 2^{gamma-n}) with S the smooth L-shell integral on
// [0,1]^n \ [0,1/2]^n.
inline double corner_unit_integral(int n, double gamma) {
    double shell = 0.0;
    // Enumerate the 2^n - 1 sub-boxes of the L-shell.
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::array<double, 3> lo{0, 0, 0}, len{0, 0, 0};
        for (int a = 0; a < n; ++a) {
            lo[a] = (mask >> a) & 1 ? 0.5 : 0.0;
            len[a] = 0.5;
        }
        RadialProfile one;
        shell += box_integral(n, lo, len, gamma, one);
    }
    return shell / (1.0 - std::pow(2.0, gamma - n));
}

// integral of psi(|x|)/|x|^gamma over [0,a]^n by dyadic corner recursion.
inline double corner_integral(int n, double a, double gamma, const RadialProfile& psi) {
    double total = 0.0;
    double scale = a;
    const int depth = 24;
    for (int k = 0; k < depth; ++k) {
        for (int mask = 1; mask < (1 << n); ++mask) {
            std::array<double, 3> lo{0, 0, 0}, len{0, 0, 0};
            for (int ax = 0; ax < n; ++ax) {
                lo[ax] = (mask >> ax) & 1 ? 0.5 * scale : 0.0;
                len[ax] = 0.5 * scale;
            }
            total += box_integral(n, lo, len, gamma, psi);
        }
        scale *= 0.5;
    }
    // Remaining corner box [0,scale]^n with psi frozen at 0.
    total += psi(0.0) * std::pow(scale, n - gamma) * corner_unit_integral(n, gamma);
    return total;
}

}  // namespace detail

struct HartreeKernel {
    Grid grid;
    PotentialSpec spec;
    double singular_cell_value = 0.0; // regularized kernel value at x = 0
    std::vector<int> padded_dims;     // 2N per axis
    // r2c half-spectrum of the padded kernel samples, scaled by h^n / (2N)^n
    // so that potential = c2r(multiplier * r2c(padded |u|^2)).
    std::vector<cplx> padded_multiplier;

    std::size_t padded_size() const {
        std::size_t s = 1;
        for (int d : padded_dims) s *= static_cast<std::size_t>(d);
        return s;
    }
    std::size_t spectrum_size() const {
        std::size_t s = 1;
        for (std::size_t i = 0; i + 1 < padded_dims.size(); ++i)
            s *= static_cast<std::size_t>(padded_dims[i]);
        return s * static_cast<std::size_t>(padded_dims.back() / 2 + 1);
    }
    // Kernel sample at a signed lattice offset (0 gives the cell average).
    double sample_at_offset(const std::array<int, 3>& off) const {
        double r2 = 0.0;
        bool zero = true;
        for (int a = 0; a < grid.dim; ++a) {
            const double x = off[a] * grid.spacing();
            r2 += x * x;
            zero = zero && off[a] == 0;
        }
        if (zero) return singular_cell_value;
        const double r = std::sqrt(r2);
        return spec.psi(r) * std::pow(r, -spec.gamma);
    }
};

inline HartreeKernel build_kernel(const Grid& grid, const PotentialSpec& spec) {
    spec.validate(grid.dim);
    HartreeKernel k;
    k.grid = grid;
    k.spec = spec;
    k.padded_dims = std::vector<int>(grid.dim, 2 * grid.points);

    const double h = grid.spacing();
    // cell average = 2^n/h^n * corner integral over [0, h/2]^n.
    k.singular_cell_value = std::pow(2.0 / h, grid.dim) *
                            detail::corner_integral(grid.dim, 0.5 * h, spec.gamma, spec.psi);

    // Sample the kernel on the padded lattice, wrap-ordered (index m stands
    // for the signed offset m*h when m < M/2, (m-M)*h otherwise).
    const int M = 2 * grid.points;
    std::vector<double> samples(k.padded_size());
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < samples.size(); ++flat) {
        std::array<int, 3> off{0, 0, 0};
        for (int a = 0; a < grid.dim; ++a) off[a] = idx[a] < M / 2 ? idx[a] : idx[a] - M;
        samples[flat] = k.sample_at_offset(off);
        for (int a = grid.dim - 1; a >= 0; --a) {
            if (++idx[a] < M) break;
            idx[a] = 0;
        }
    }

    std::vector<cplx> spectrum(k.spectrum_size());
    detail::dft_r2c(samples.data(), spectrum.data(), k.padded_dims);
    const double scale = grid.cell_volume() / static_cast<double>(k.padded_size());
    for (cplx& c : spectrum) c *= scale;
    k.padded_multiplier = std::move(spectrum);
    return k;
}

// K_gamma(v) for a real nonnegative sample array v on the kernel's grid,
// via zero-padded linear convolution. Returns the potential on the grid.
inline std::vector<double> convolve_kernel(const HartreeKernel& k,
                                           const std::vector<double>& v) {
    const Grid& g = k.grid;
    if (v.size() != g.size()) throw std::invalid_argument("grid mismatch");
    const int N = g.points, M = 2 * N;

    std::vector<double> padded(k.padded_size(), 0.0);
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        std::size_t p = 0;
        for (int a = 0; a < g.dim; ++a) p = p * M + idx[a];
        padded[p] = v[flat];
    });

    std::vector<cplx> spectrum(k.spectrum_size());
    detail::dft_r2c(padded.data(), spectrum.data(), k.padded_dims);
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= k.padded_multiplier[i];
    detail::dft_c2r(spectrum.data(), padded.data(), k.padded_dims);

    std::vector<double> out(g.size());
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        std::size_t p = 0;
        for (int a = 0; a < g.dim; ++a) p = p * M + idx[a];
        out[flat] = padded[p];
    });
    return out;
}

// K_gamma(|u|^2): real, nonnegative up to roundoff.
inline std::vector<double> hartree_potential(const ComplexField& u, const HartreeKernel& k) {
    require_same_grid(u.grid, k.grid);
    if (u.space != Space::physical)
        throw std::invalid_argument("hartree_potential: field must be physical space");
    std::vector<double> density(u.values.size());
    for (std::size_t i = 0; i < density.size(); ++i) density[i] = std::norm(u.values[i]);
    return convolve_kernel(k, density);
}

// F(u) = lambda K_gamma(|u|^2) u.
inline ComplexField nonlinearity(const ComplexField& u, const HartreeKernel& k) {
    std::vector<double> pot = hartree_potential(u, k);
    ComplexField out = u;
    const double lam = static_cast<double>(k.spec.lambda);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= lam * pot[i];
    return out;
}

// V(u) = (lambda/4) integral K_gamma(|u|^2) |u|^2 dx.
inline double potential_energy(const ComplexField& u, const HartreeKernel& k) {
    std::vector<double> pot = hartree_potential(u, k);
    double s = 0.0;
    for (std::size_t i = 0; i < pot.size(); ++i) s += pot[i] * std::norm(u.values[i]);
    return 0.25 * k.spec.lambda * s * u.grid.cell_volume();
}

}  // namespace fhnls
