// Spectral core: grids, transform conventions, multiplier application and
// Sobolev norms, checked against explicit DFT sums and analytic transforms.

#include <gtest/gtest.h>

#include "fhnls/random.hpp"
#include "fhnls/spectral.hpp"

using namespace fhnls;

namespace {

ComplexField random_field(const Grid& g, std::uint64_t seed) {
    Rng rng(seed);
    ComplexField u = make_field(g);
    for (cplx& v : u.values) v = cplx(rng.gaussian(), rng.gaussian());
    return u;
}

ComplexField plane_wave(const Grid& g, const std::array<int, 3>& mode, double amp = 1.0) {
    return sample(g, [&](const std::array<double, 3>& x) {
        double phase = 0.0;
        for (int a = 0; a < g.dim; ++a) phase += g.freq_step() * mode[a] * x[a];
        return amp * cplx(std::cos(phase), std::sin(phase));
    });
}

double rel_l2_error(const ComplexField& a, const ComplexField& b) {
    return l2_norm(a - b) / l2_norm(b);
}

}  // namespace

TEST(Grid, BuildAndLattices) {
    const Grid g = build_grid(1, 8, kPi);
    EXPECT_NEAR(g.spacing(), kPi / 4.0, 1e-15);
    // frequencies pi j / L with L = pi: integers -4..3
    EXPECT_DOUBLE_EQ(g.frequency(0), 0.0);
    EXPECT_DOUBLE_EQ(g.frequency(1), 1.0);
    EXPECT_DOUBLE_EQ(g.frequency(4), -4.0);
    EXPECT_DOUBLE_EQ(g.frequency(7), -1.0);

    const Grid g2 = build_grid(2, 16, 10.0);
    EXPECT_EQ(g2.size(), 256u);
    EXPECT_NEAR(g2.spacing(), 1.25, 1e-15);

    const Grid g3 = build_grid(3, 32, 8.0);
    EXPECT_NEAR(g3.freq_step(), kPi / 8.0, 1e-15);

    // spacing * N = 2L and cell volumes
    EXPECT_NEAR(g3.spacing() * g3.points / (2 * g3.half_length), 1.0, 1e-14);
    EXPECT_NEAR(g3.cell_volume() * g3.size(), g3.box_volume(),
                1e-14 * g3.box_volume());
}

TEST(Grid, RejectsBadParameters) {
    EXPECT_THROW(build_grid(0, 16, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(4, 16, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(1, 6, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(1, 15, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(1, 16, 0.0), std::invalid_argument);
    EXPECT_THROW(build_grid(1, 16, -2.0), std::invalid_argument);
}

TEST(Transform, ConstantFieldConcentratesAtZero) {
    const Grid g = build_grid(2, 16, 5.0);
    ComplexField u = make_field(g);
    for (cplx& v : u.values) v = 1.0;
    ComplexField hat = transform(u);
    EXPECT_NEAR(hat.values[0].real(), g.box_volume(), 1e-10);
    EXPECT_NEAR(hat.values[0].imag(), 0.0, 1e-10);
    double off = 0.0;
    for (std::size_t i = 1; i < hat.values.size(); ++i) off = std::max(off, std::abs(hat.values[i]));
    EXPECT_LT(off, 1e-9);
}

TEST(Transform, PlaneWaveSingleBin) {
    const Grid g = build_grid(1, 32, 7.0);
    ComplexField u = plane_wave(g, {5, 0, 0});
    ComplexField hat = transform(u);
    EXPECT_NEAR(std::abs(hat.values[5] - cplx(g.box_volume(), 0.0)), 0.0, 1e-9);
    for (int k = 0; k < g.points; ++k) {
        if (k == 5) continue;
        EXPECT_LT(std::abs(hat.values[k]), 1e-9) << "leak at mode " << k;
    }
}

TEST(Transform, RoundTripRandomField) {
    for (int dim = 1; dim <= 3; ++dim) {
        const Grid g = build_grid(dim, dim == 3 ? 12 : 48, 3.0);
        ComplexField u = random_field(g, 7 + dim);
        ComplexField back = inverse_transform(transform(u));
        EXPECT_LT(rel_l2_error(back, u), 1e-12) << "dim " << dim;
    }
}

TEST(Transform, ParsevalOnRandomFields) {
    const Grid g = build_grid(2, 32, 4.0);
    ComplexField u = random_field(g, 11);
    ComplexField hat = transform(u);
    EXPECT_NEAR(l2_norm_sq(hat), l2_norm_sq(u), 1e-12 * l2_norm_sq(u));
}

TEST(Transform, SpaceFlagEnforced) {
    const Grid g = build_grid(1, 16, 1.0);
    ComplexField u = make_field(g);
    EXPECT_THROW(inverse_transform(u), std::invalid_argument);
    ComplexField hat = transform(u);
    EXPECT_THROW(transform(hat), std::invalid_argument);
}

TEST(Symbol, PlaneWaveEigenfunction) {
    const Grid g = build_grid(1, 64, 10.0);
    const double m = 1.7, alpha = 1.5;
    const DispersionSymbol sym = DispersionSymbol::relativistic(g, m, alpha);
    ComplexField u = plane_wave(g, {3, 0, 0});
    const double k = g.frequency(3);
    const double expected = std::pow(m * m + k * k, 0.5 * alpha);
    ComplexField out = apply_symbol(u, sym);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        ASSERT_LT(std::abs(out.values[i] - expected * u.values[i]), 1e-10);
}

TEST(Symbol, ConstantFieldSeesMassTerm) {
    const Grid g = build_grid(1, 16, 2.0);
    const double alpha = 1.3;
    const DispersionSymbol sym = DispersionSymbol::relativistic(g, 2.0, alpha);
    ComplexField u = make_field(g);
    for (cplx& v : u.values) v = 3.0;
    ComplexField out = apply_symbol(u, sym);
    const double expected = std::pow(2.0, alpha) * 3.0;
    for (const cplx& v : out.values) ASSERT_NEAR(v.real(), expected, 1e-12);
}

// Dense-matrix oracle: the same operator assembled as an explicit DFT sum.
TEST(Symbol, MatchesDenseDftOracle) {
    const Grid g = build_grid(1, 16, 3.0);
    const double m = 3.0, alpha = 1.5;
    const DispersionSymbol sym = DispersionSymbol::relativistic(g, m, alpha);
    ComplexField u = random_field(g, 23);

    const int N = g.points;
    const double h = g.spacing();
    std::vector<cplx> hat(N, cplx(0, 0));
    for (int k = 0; k < N; ++k) {
        const double xi = g.frequency(k);
        for (int j = 0; j < N; ++j) {
            const double x = g.position(j);
            hat[k] += h * std::exp(cplx(0.0, -x * xi)) * u.values[j];
        }
    }
    ComplexField expected = make_field(g);
    for (int j = 0; j < N; ++j) {
        const double x = g.position(j);
        cplx acc(0, 0);
        for (int k = 0; k < N; ++k) {
            const double xi = g.frequency(k);
            acc += std::exp(cplx(0.0, x * xi)) * std::pow(m * m + xi * xi, 0.5 * alpha) * hat[k];
        }
        expected.values[j] = acc / (2.0 * g.half_length);
    }

    ComplexField out = apply_symbol(u, sym);
    EXPECT_LT(rel_l2_error(out, expected), 1e-10);
}

TEST(Symbol, LinearityAndComposition) {
    const Grid g = build_grid(1, 48, 6.0);
    const DispersionSymbol s1 = DispersionSymbol::relativistic(g, 1.2, 0.7);
    const DispersionSymbol s2 = DispersionSymbol::relativistic(g, 1.2, 0.9);
    const DispersionSymbol s12 = DispersionSymbol::relativistic(g, 1.2, 1.6);
    ComplexField u = random_field(g, 3);
    ComplexField v = random_field(g, 4);

    const cplx a(0.3, -1.1), b(2.0, 0.4);
    ComplexField lhs = apply_symbol(a * u + b * v, s1);
    ComplexField rhs = a * apply_symbol(u, s1) + b * apply_symbol(v, s1);
    EXPECT_LT(l2_norm(lhs - rhs) / l2_norm(rhs), 1e-12);

    ComplexField comp = apply_symbol(apply_symbol(u, s1), s2);
    ComplexField direct = apply_symbol(u, s12);
    EXPECT_LT(rel_l2_error(comp, direct), 1e-10);
}

TEST(Symbol, GridMismatchRejected) {
    const Grid g = build_grid(1, 16, 1.0);
    const Grid g2 = build_grid(1, 32, 1.0);
    const DispersionSymbol sym = DispersionSymbol::relativistic(g2, 1.0, 1.0);
    ComplexField u = make_field(g);
    EXPECT_THROW(apply_symbol(u, sym), std::invalid_argument);
}

TEST(Symbol, ShiftedVanishesAtZeroAndNonrelCoefficient) {
    const Grid g = build_grid(1, 32, 5.0);
    const double m = 2.5, alpha = 1.4;
    const DispersionSymbol shifted = DispersionSymbol::shifted_relativistic(g, m, alpha);
    EXPECT_DOUBLE_EQ(shifted.multiplier[0], 0.0);
    const DispersionSymbol rel = DispersionSymbol::relativistic(g, m, alpha);
    const double malpha = std::pow(m, alpha);
    for (std::size_t i = 0; i < shifted.multiplier.size(); ++i)
        ASSERT_NEAR(shifted.multiplier[i], rel.multiplier[i] - malpha, 1e-12);

    const DispersionSymbol nonrel = DispersionSymbol::nonrelativistic(g, m, alpha);
    const double k1 = g.frequency(1);
    EXPECT_NEAR(nonrel.multiplier[1], 0.5 * alpha / std::pow(m, 2.0 - alpha) * k1 * k1, 1e-14);
    EXPECT_THROW(DispersionSymbol::nonrelativistic(g, 0.0, alpha), std::invalid_argument);
}

// relativistic(m, s) -> homogeneous(s) pointwise as m -> 0: the relative gap
// on nonzero modes is bounded by (m/|xi|_min)^2 |s|.
TEST(Symbol, SmallMassApproachesHomogeneous) {
    const Grid g = build_grid(1, 64, 10.0); // |xi|_min = pi/10 > 0.1
    const double m = 1e-4, s = 1.5;
    const DispersionSymbol rel = DispersionSymbol::relativistic(g, m, s);
    const DispersionSymbol hom = DispersionSymbol::homogeneous(g, s);
    const double xi_min = g.freq_step();
    const double bound = (m / xi_min) * (m / xi_min) * std::abs(s);
    for (int k = 1; k < g.points; ++k) {
        const double gap = std::abs(rel.multiplier[k] - hom.multiplier[k]) / hom.multiplier[k];
        ASSERT_LE(gap, bound * (1.0 + 1e-9)) << "mode " << k;
    }
}

TEST(SobolevNorm, ZeroOrderIsL2) {
    const Grid g = build_grid(2, 24, 3.0);
    ComplexField u = random_field(g, 9);
    const double l2 = l2_norm(u);
    EXPECT_NEAR(sobolev_norm(u, 0.0, SobolevVariant::homogeneous), l2, 1e-12 * l2);
    EXPECT_NEAR(sobolev_norm(u, 0.0, SobolevVariant::inhomogeneous), l2, 1e-12 * l2);
    EXPECT_NEAR(sobolev_norm(u, 0.0, SobolevVariant::massive, 3.0), l2, 1e-12 * l2);
}

TEST(SobolevNorm, PlaneWaveClosedForm) {
    const Grid g = build_grid(1, 64, 9.0);
    const double amp = 0.7, s = 1.25;
    ComplexField u = plane_wave(g, {4, 0, 0}, amp);
    const double k = g.frequency(4);
    const double expected = amp * std::sqrt(g.box_volume()) * std::pow(std::abs(k), s);
    EXPECT_NEAR(sobolev_norm(u, s, SobolevVariant::homogeneous), expected, 1e-10 * expected);
}

// Gaussian H^1 norm against quadrature of (1+xi^2) |u_hat|^2 with the analytic
// transform u_hat(xi) = sqrt(2 pi) exp(-xi^2/2).
TEST(SobolevNorm, GaussianAnalyticOracle) {
    const Grid g = build_grid(1, 256, 12.0);
    ComplexField u = sample(g, [](const std::array<double, 3>& x) {
        return cplx(std::exp(-0.5 * x[0] * x[0]), 0.0);
    });
    const int nq = 20000;
    const double xi_max = 40.0;
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) {
        const double xi = -xi_max + 2.0 * xi_max * (i + 0.5) / nq;
        const double uhat2 = 2.0 * kPi * std::exp(-xi * xi);
        acc += (1.0 + xi * xi) * uhat2;
    }
    acc *= 2.0 * xi_max / nq / (2.0 * kPi);
    const double expected = std::sqrt(acc);
    EXPECT_NEAR(sobolev_norm(u, 1.0, SobolevVariant::inhomogeneous), expected,
                1e-8 * expected);
}

TEST(SobolevNorm, HomogeneousNegativeOrderDropsMean) {
    const Grid g = build_grid(1, 32, 4.0);
    ComplexField u = make_field(g);
    for (cplx& v : u.values) v = 5.0; // pure mean
    EXPECT_NEAR(sobolev_norm(u, -0.5, SobolevVariant::homogeneous), 0.0, 1e-12);
}
