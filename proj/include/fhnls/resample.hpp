#pragma once

// Trigonometric resampling: evaluates a field's Fourier series on the lattice
// of another grid (same dimension, any N or L). Separable, one dense
// axis-contraction per dimension. Exact for band-limited data up to roundoff;
// the series is 2L-periodic, so targets wider than the source see the
// periodic continuation.

#include <vector>

#include "fhnls/field.hpp"
#include "fhnls/spectral.hpp"

namespace fhnls {

inline ComplexField resample(const ComplexField& f, const Grid& target) {
    if (f.grid.dim != target.dim) throw std::invalid_argument("resample: dimension mismatch");
    const Grid& src = f.grid;
    ComplexField hat = f.space == Space::frequency ? f : transform(f);

    // Per-axis evaluation matrix E[j', k] = exp(i x'_{j'} xi_k).
    const int N = src.points;
    const int Np = target.points;
    std::vector<cplx> E(static_cast<std::size_t>(Np) * N);
    for (int jp = 0; jp < Np; ++jp) {
        const double x = target.position(jp);
        for (int k = 0; k < N; ++k) {
            const double phase = x * src.frequency(k);
            E[static_cast<std::size_t>(jp) * N + k] = cplx(std::cos(phase), std::sin(phase));
        }
    }

    // Contract one axis at a time; shape starts all-N and ends all-Np.
    std::vector<cplx> cur = hat.values;
    std::array<int, 3> shape{1, 1, 1};
    for (int a = 0; a < src.dim; ++a) shape[a] = N;
    for (int axis = 0; axis < src.dim; ++axis) {
        std::size_t outer = 1, inner = 1;
        for (int a = 0; a < axis; ++a) outer *= shape[a];
        for (int a = axis + 1; a < src.dim; ++a) inner *= shape[a];
        std::vector<cplx> next(outer * static_cast<std::size_t>(Np) * inner, cplx(0, 0));
        for (std::size_t o = 0; o < outer; ++o)
            for (int jp = 0; jp < Np; ++jp)
                for (int k = 0; k < N; ++k) {
                    const cplx e = E[static_cast<std::size_t>(jp) * N + k];
                    const cplx* srcp = cur.data() + (o * N + k) * inner;
                    cplx* dstp = next.data() + (o * Np + jp) * inner;
                    for (std::size_t i = 0; i < inner; ++i) dstp[i] += e * srcp[i];
                }
        cur = std::move(next);
        shape[axis] = Np;
    }

    ComplexField out;
    out.grid = target;
    out.space = Space::physical;
    out.values = std::move(cur);
    const double scale = 1.0 / src.box_volume();
    for (cplx& v : out.values) v *= scale;
    return out;
}

}  // namespace fhnls
