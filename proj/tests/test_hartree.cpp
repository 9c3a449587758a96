// Hartree kernel and potential: singular-cell quadrature, the c_{n,gamma}
// multiplier self-check, the brute-force convolution oracle, and the frozen
// Hardy / potential-bound regression constants.

#include <gtest/gtest.h>

#include <cmath>

#include "fhnls/hartree.hpp"
#include "fhnls/inequality.hpp"
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

// O(N^2) reference: K(x_i) = h^n sum_j k(x_i - x_j) v_j with the regularized
// kernel sample at zero offset.
std::vector<double> brute_force_potential(const HartreeKernel& k, const std::vector<double>& v) {
    const Grid& g = k.grid;
    std::vector<double> out(g.size(), 0.0);
    std::vector<std::array<int, 3>> sites(g.size());
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) { sites[flat] = idx; });
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < out.size(); ++j) {
            std::array<int, 3> off{0, 0, 0};
            for (int a = 0; a < g.dim; ++a) off[a] = sites[i][a] - sites[j][a];
            acc += k.sample_at_offset(off) * v[j];
        }
        out[i] = acc * g.cell_volume();
    }
    return out;
}

}  // namespace

TEST(Kernel, SampleFormulaAndValidation) {
    const Grid g = build_grid(1, 64, 8.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = 1;
    const HartreeKernel k = build_kernel(g, spec);
    const double h = g.spacing();
    EXPECT_NEAR(k.sample_at_offset({1, 0, 0}), std::pow(h, -0.5), 1e-13);

    PotentialSpec bad = spec;
    bad.gamma = 1.0; // gamma >= n
    EXPECT_THROW(build_kernel(g, bad), std::invalid_argument);
    bad.gamma = 0.0;
    EXPECT_THROW(build_kernel(g, bad), std::invalid_argument);
}

// Exact cell average of |x|^{-1/2} over [-h/2, h/2]:
// (1/h) * 2 * integral_0^{h/2} x^{-1/2} dx = (4/h) sqrt(h/2) = sqrt(8/h).
TEST(Kernel, SingularCellClosedForm1D) {
    const Grid g = build_grid(1, 32, 4.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = 1;
    const HartreeKernel k = build_kernel(g, spec);
    const double h = g.spacing();
    EXPECT_NEAR(k.singular_cell_value, std::sqrt(8.0 / h), 1e-10 * std::sqrt(8.0 / h));
}

TEST(Kernel, SingularCellClosedForm2D) {
    // gamma = 1, n = 2: cell average of 1/|x| over [-h/2,h/2]^2 is
    // (4/h) ln(1 + sqrt 2) by direct integration.
    const Grid g = build_grid(2, 16, 2.0);
    PotentialSpec spec;
    spec.gamma = 1.0;
    spec.lambda = 1;
    const HartreeKernel k = build_kernel(g, spec);
    const double h = g.spacing();
    const double expected = 4.0 / h * std::log(1.0 + std::sqrt(2.0));
    EXPECT_NEAR(k.singular_cell_value, expected, 1e-10 * expected);
}

// For psi = 1 the padded multiplier approximates the homogeneous symbol
// c_{n,gamma} |xi|^{gamma-n} at moderate frequencies.
TEST(Kernel, MultiplierMatchesHomogeneousSymbol) {
    struct Case {
        int dim, points;
        double L, gamma;
    };
    for (const Case c : {Case{1, 256, 40.0, 0.5}, Case{2, 128, 30.0, 1.0}, Case{3, 48, 16.0, 1.0}}) {
        const Grid g = build_grid(c.dim, c.points, c.L);
        PotentialSpec spec;
        spec.gamma = c.gamma;
        spec.lambda = 1;
        const HartreeKernel k = build_kernel(g, spec);
        const double n = c.dim;
        const double cng = std::pow(2.0, n - c.gamma) * std::pow(kPi, 0.5 * n) *
                           std::tgamma(0.5 * (n - c.gamma)) / std::tgamma(0.5 * c.gamma);

        // padded grid frequencies: xi = pi k / (2L); r2c half-spectrum layout.
        const Grid padded = build_grid(c.dim, 2 * c.points, 2.0 * c.L);
        const int M = padded.points;
        const int last = M / 2 + 1;
        const double rescale = static_cast<double>(k.padded_size());
        double worst = 0.0;
        std::array<int, 3> idx{0, 0, 0};
        const std::size_t total = k.spectrum_size();
        for (std::size_t flat = 0; flat < total; ++flat) {
            double xi2 = 0.0;
            for (int a = 0; a < c.dim; ++a) xi2 += std::pow(padded.frequency(idx[a]), 2);
            const double xi = std::sqrt(xi2);
            if (xi >= 1.0 && xi <= c.points * kPi / (4.0 * c.L)) {
                const double model = cng * std::pow(xi, c.gamma - n);
                const double got = k.padded_multiplier[flat].real() * rescale;
                worst = std::max(worst, std::abs(got - model) / model);
            }
            for (int a = c.dim - 1; a >= 0; --a) {
                const int lim = a == c.dim - 1 ? last : M;
                if (++idx[a] < lim) break;
                idx[a] = 0;
            }
        }
        EXPECT_LT(worst, 0.02) << "n = " << c.dim;
    }
}

TEST(Potential, ZeroInputAndGridMismatch) {
    const Grid g = build_grid(1, 32, 4.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = -1;
    const HartreeKernel k = build_kernel(g, spec);
    ComplexField u = make_field(g);
    const std::vector<double> pot = hartree_potential(u, k);
    for (double v : pot) EXPECT_EQ(v, 0.0);

    ComplexField other = make_field(build_grid(1, 64, 4.0));
    EXPECT_THROW(hartree_potential(other, k), std::invalid_argument);
}

TEST(Potential, MatchesBruteForceDoubleSum) {
    Rng rng(17);
    for (int n : {8, 16, 24, 32}) {
        const Grid g = build_grid(1, n, 3.0);
        PotentialSpec spec;
        spec.gamma = 0.4;
        spec.lambda = 1;
        const HartreeKernel k = build_kernel(g, spec);
        std::vector<double> v(g.size());
        for (double& x : v) x = rng.uniform();
        const std::vector<double> fast = convolve_kernel(k, v);
        const std::vector<double> slow = brute_force_potential(k, v);
        for (std::size_t i = 0; i < v.size(); ++i)
            ASSERT_NEAR(fast[i], slow[i], 1e-10 * std::max(1.0, std::abs(slow[i])));
    }
}

// Far field of a narrow unit-mass bump behaves like R^{-gamma}.
TEST(Potential, FarFieldDecay) {
    const Grid g = build_grid(1, 512, 40.0);
    PotentialSpec spec;
    spec.gamma = 0.6;
    spec.lambda = 1;
    const HartreeKernel k = build_kernel(g, spec);
    const double width = 0.5;
    ComplexField u = sample(g, [&](const std::array<double, 3>& x) {
        const double a = std::pow(kPi * width * width, -0.25); // unit L2 mass density
        return cplx(a * std::exp(-x[0] * x[0] / (2.0 * width * width)), 0.0);
    });
    const std::vector<double> pot = hartree_potential(u, k);
    const double R = 5.0 * width * 4.0; // well outside the bump
    const int j = static_cast<int>((R + g.half_length) / g.spacing());
    const double expected = std::pow(R, -spec.gamma);
    EXPECT_NEAR(pot[j], expected, 0.01 * expected);
}

TEST(Potential, TranslationEquivariance) {
    const Grid g = build_grid(1, 64, 8.0);
    PotentialSpec spec;
    spec.gamma = 0.7;
    spec.lambda = 1;
    const HartreeKernel k = build_kernel(g, spec);
    ComplexField u = sample(g, [&](const std::array<double, 3>& x) {
        return cplx(std::exp(-2.0 * x[0] * x[0]), 0.0);
    });
    const int shift = 4;
    ComplexField us = make_field(g);
    for (int j = 0; j < g.points; ++j)
        us.values[(j + shift) % g.points] = u.values[j];
    const std::vector<double> pot = hartree_potential(u, k);
    const std::vector<double> pots = hartree_potential(us, k);
    // fields are well localized, so the linear convolution translates exactly
    // away from the wrap seam
    for (int j = g.points / 4; j < 3 * g.points / 4; ++j)
        ASSERT_NEAR(pots[(j + shift) % g.points], pot[j], 1e-12 * std::max(1.0, pot[j]));
}

TEST(Nonlinearity, RealnessGaugeAndHomogeneity) {
    const Grid g = build_grid(1, 48, 6.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = -1;
    const HartreeKernel k = build_kernel(g, spec);

    ComplexField u = sample(g, [](const std::array<double, 3>& x) {
        return cplx(std::exp(-x[0] * x[0]) * (1.0 + 0.3 * x[0]), 0.0);
    });
    ComplexField F = nonlinearity(u, k);
    for (const cplx& v : F.values) ASSERT_EQ(v.imag(), 0.0);

    // gauge covariance F(e^{i theta} u) = e^{i theta} F(u), exactly
    const cplx phase = std::polar(1.0, 0.7);
    ComplexField Fg = nonlinearity(phase * u, k);
    for (std::size_t i = 0; i < F.values.size(); ++i)
        ASSERT_LT(std::abs(Fg.values[i] - phase * F.values[i]),
                  1e-14 * std::max(1.0, std::abs(F.values[i])));

    // cubic homogeneity F(a u) = a^3 F(u) for real a
    ComplexField F2 = nonlinearity(cplx(2.0, 0.0) * u, k);
    for (std::size_t i = 0; i < F.values.size(); ++i)
        ASSERT_NEAR(F2.values[i].real(), 8.0 * F.values[i].real(),
                    1e-12 * std::max(1.0, std::abs(8.0 * F.values[i].real())));
}

TEST(Nonlinearity, L2BoundByPotentialSup) {
    const Grid g = build_grid(1, 64, 6.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = -1;
    const HartreeKernel k = build_kernel(g, spec);
    ComplexField u = random_field(g, 5);
    ComplexField F = nonlinearity(u, k);
    const std::vector<double> pot = hartree_potential(u, k);
    double sup = 0.0;
    for (double v : pot) sup = std::max(sup, v);
    EXPECT_LE(l2_norm(F), sup * l2_norm(u) * (1.0 + 1e-12));
}

TEST(PotentialEnergy, SignAndZero) {
    const Grid g = build_grid(1, 32, 4.0);
    for (int lambda : {-1, 1}) {
        PotentialSpec spec;
        spec.gamma = 0.5;
        spec.lambda = lambda;
        const HartreeKernel k = build_kernel(g, spec);
        ComplexField zero = make_field(g);
        EXPECT_EQ(potential_energy(zero, k), 0.0);
        ComplexField u = random_field(g, 2);
        const double V = potential_energy(u, k);
        EXPECT_GT(lambda * V, 0.0);
    }
}

// V against the direct double integral (1/4) iint k(x-y) |u|^2 |u|^2.
TEST(PotentialEnergy, DoubleSumOracle) {
    const Grid g = build_grid(1, 32, 5.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = -1;
    const HartreeKernel k = build_kernel(g, spec);
    // symmetric double bump
    ComplexField u = sample(g, [](const std::array<double, 3>& x) {
        return cplx(std::exp(-2.0 * (x[0] - 1.2) * (x[0] - 1.2)) +
                        std::exp(-2.0 * (x[0] + 1.2) * (x[0] + 1.2)),
                    0.0);
    });
    std::vector<double> dens(g.size());
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(u.values[i]);
    const std::vector<double> pot_slow = brute_force_potential(k, dens);
    double direct = 0.0;
    for (std::size_t i = 0; i < dens.size(); ++i) direct += pot_slow[i] * dens[i];
    direct *= 0.25 * spec.lambda * g.cell_volume();
    EXPECT_NEAR(potential_energy(u, k), direct, 1e-6 * std::abs(direct));
}

TEST(PsiTable, LoadInterpolateAndValidate) {
    const std::string path = "psi_test_table.csv";
    {
        std::ofstream out(path);
        out << "# rho, psi, dpsi\n";
        out << "0.0, 1.0, 0.0\n";
        out << "1.0, 0.5, -0.5\n";
        out << "2.0, 0.25, -0.25\n";
    }
    RadialProfile psi = load_psi_table(path);
    EXPECT_FALSE(psi.is_one);
    EXPECT_DOUBLE_EQ(psi(0.0), 1.0);
    EXPECT_DOUBLE_EQ(psi(0.5), 0.75);
    EXPECT_DOUBLE_EQ(psi(5.0), 0.25); // clamped beyond table end
    EXPECT_TRUE(psi.has_derivative());
    EXPECT_DOUBLE_EQ(psi.derivative(1.0), -0.5);
    EXPECT_DOUBLE_EQ(psi.sup(), 1.0);

    {
        std::ofstream out(path);
        out << "0.0, 1.0\n0.5, -0.1\n";
    }
    EXPECT_THROW(load_psi_table(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST(PsiTable, KernelUsesProfile) {
    const Grid g = build_grid(1, 32, 4.0);
    PotentialSpec spec;
    spec.gamma = 0.5;
    spec.lambda = 1;
    spec.psi.is_one = false;
    spec.psi.rho = {0.0, 2.0, 100.0};
    spec.psi.value = {2.0, 2.0, 2.0}; // constant 2
    const HartreeKernel k2 = build_kernel(g, spec);
    PotentialSpec one;
    one.gamma = 0.5;
    one.lambda = 1;
    const HartreeKernel k1 = build_kernel(g, one);
    EXPECT_NEAR(k2.sample_at_offset({3, 0, 0}), 2.0 * k1.sample_at_offset({3, 0, 0}), 1e-13);
    EXPECT_NEAR(k2.singular_cell_value, 2.0 * k1.singular_cell_value,
                1e-10 * k2.singular_cell_value);
}

// Frozen regression constants, fitted once over the seeded family: the Hardy
// bound sup_x K_gamma(|u|^2) <= C ||u||^2_{Hdot^{gamma/2}} and the potential
// bound |V| <= C ||u||_{L^2}^{2(2-gamma/alpha)} ||u||_{Hdot^{alpha/2}}^{2 gamma/alpha}.
TEST(FrozenBounds, HardyAndPotential) {
    const double kHardyFrozenC = 0.277;     // measured 0.26383 at these seeds
    const double kPotentialFrozenC = 0.069; // measured 0.065516
    const Grid g = build_grid(2, 48, 10.0);
    const double gamma = 1.0, alpha = 0.8; // alpha < gamma < 2 alpha
    PotentialSpec spec;
    spec.gamma = gamma;
    spec.lambda = -1;
    const HartreeKernel k = build_kernel(g, spec);
    family::GrfSpec fam_spec{2, 10.0, 12, 2.0, false};
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const ComplexField u = family::synthesize_grf(seed, fam_spec, g);
        const std::vector<double> pot = hartree_potential(u, k);
        double sup = 0.0;
        for (double v : pot) sup = std::max(sup, v);
        const double hdot_g = sobolev_norm(u, 0.5 * gamma, SobolevVariant::homogeneous);
        ASSERT_LE(sup, kHardyFrozenC * hdot_g * hdot_g) << "seed " << seed;

        const double V = std::abs(potential_energy(u, k));
        const double l2 = l2_norm(u);
        const double hdot_a = sobolev_norm(u, 0.5 * alpha, SobolevVariant::homogeneous);
        const double rhs = std::pow(l2, 2.0 * (2.0 - gamma / alpha)) *
                           std::pow(hdot_a, 2.0 * gamma / alpha);
        ASSERT_LE(V, kPotentialFrozenC * rhs) << "seed " << seed;
    }
}
