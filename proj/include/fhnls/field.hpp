#pragma once

// ComplexField: N^n complex samples on a Grid, tagged physical or frequency.
// Fields are value types; operations return new fields.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fhnls/grid.hpp"

namespace fhnls {

using cplx = std::complex<double>;

enum class Space { physical, frequency };

struct ComplexField {
    Grid grid;
    Space space = Space::physical;
    std::vector<cplx> values;
};

inline ComplexField make_field(const Grid& g, Space space = Space::physical) {
    return ComplexField{g, space, std::vector<cplx>(g.size())};
}

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

// Samples fn(idx) over the physical lattice.
inline ComplexField sample(const Grid& g,
                           const std::function<cplx(const std::array<double, 3>&)>& fn) {
    ComplexField f = make_field(g);
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        std::array<double, 3> x{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) x[a] = g.position(idx[a]);
        f.values[flat] = fn(x);
    });
    return f;
}

// L2 inner product <f, g> = integral of conj(f) g via grid quadrature
// (physical space) or the (2pi)^-n weighted frequency sum; both sides of
// Parseval give the same value.
inline cplx inner(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f.grid, g.grid);
    if (f.space != g.space) throw std::invalid_argument("space mismatch in inner product");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += std::conj(f.values[i]) * g.values[i];
    const double w = f.space == Space::physical
                         ? f.grid.cell_volume()
                         : 1.0 / f.grid.box_volume();
    return s * w;
}

inline double l2_norm_sq(const ComplexField& f) {
    double s = 0.0;
    for (const cplx& v : f.values) s += std::norm(v);
    const double w = f.space == Space::physical
                         ? f.grid.cell_volume()
                         : 1.0 / f.grid.box_volume();
    return s * w;
}

inline double l2_norm(const ComplexField& f) { return std::sqrt(l2_norm_sq(f)); }

// Grid-quadrature L^r norm; r = infinity is the grid max.
inline double lp_norm(const ComplexField& f, double r) {
    if (f.space != Space::physical) throw std::invalid_argument("lp_norm needs physical space");
    if (std::isinf(r)) {
        double m = 0.0;
        for (const cplx& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (const cplx& v : f.values) s += std::pow(std::abs(v), r);
    return std::pow(s * f.grid.cell_volume(), 1.0 / r);
}

inline ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid, b.grid);
    ComplexField out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

inline ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid, b.grid);
    ComplexField out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

inline ComplexField operator*(cplx c, const ComplexField& a) {
    ComplexField out = a;
    for (cplx& v : out.values) v *= c;
    return out;
}

}  // namespace fhnls
