#pragma once

// Numerical probes of the functional inequalities behind the existence and
// blowup arguments. Each checker evaluates both sides on a seeded family of
// band-limited Gaussian random fields plus deterministic adversarial profiles
// (off-center bumps, chirps, bump pairs), tracks the worst LHS/RHS ratio, and
// re-evaluates the family at doubled resolution; a refinement ratio far from
// one flags an under-resolved (or genuinely divergent) probe.
//
// Samples are continuum-defined: a Gaussian random field is a finite list of
// Fourier modes (cutoff N/4 on the base grid) times an analytic spatial
// window, so the same function can be synthesized on the base and refined
// lattices.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fhnls/field.hpp"
#include "fhnls/hartree.hpp"
#include "fhnls/random.hpp"
#include "fhnls/spectral.hpp"

namespace fhnls {

struct RatioReport {
    std::string inequality_id;
    int samples = 0;
    double worst_ratio = 0.0;
    std::uint64_t worst_case_seed = 0;
    int grid_dim = 0;
    int grid_points = 0;
    double grid_half_length = 0.0;
    double refinement_ratio = 0.0; // worst at 2x resolution / worst
    std::vector<double> sweep_ratios; // commutator m-sweep only
};

// A field defined independently of the sampling resolution, with the seed (or
// synthetic id for adversarial profiles) used for reporting.
struct FamilySample {
    std::uint64_t id = 0;
    std::function<ComplexField(const Grid&)> realize;
};

namespace family {

struct GrfSpec {
    int dim = 2;
    double half_length = 10.0;
    int cutoff = 8;          // max |signed mode| per axis (N/4 on the base grid)
    double window_w = 2.5;   // spatial Gaussian window width
    bool real_part = false;
};

inline ComplexField synthesize_grf(std::uint64_t seed, const GrfSpec& spec, const Grid& g) {
    if (g.dim != spec.dim || g.half_length != spec.half_length)
        throw std::invalid_argument("grf: grid incompatible with spec");
    if (g.points < 2 * spec.cutoff + 2)
        throw std::invalid_argument("grf: grid cannot hold the band limit");
    Rng rng(seed);
    ComplexField hat = make_field(g, Space::frequency);
    const int c = spec.cutoff;
    std::array<int, 3> k{0, 0, 0};
    // Iterate signed modes in a fixed order so every grid sees the same draw.
    const int span = 2 * c + 1;
    int total = 1;
    for (int a = 0; a < spec.dim; ++a) total *= span;
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        for (int a = spec.dim - 1; a >= 0; --a) {
            k[a] = rem % span - c;
            rem /= span;
        }
        const cplx amp(rng.gaussian(), rng.gaussian());
        std::size_t index = 0;
        for (int a = 0; a < spec.dim; ++a) {
            const int ka = k[a] >= 0 ? k[a] : k[a] + g.points;
            index = index * g.points + ka;
        }
        hat.values[index] = amp;
    }
    ComplexField u = inverse_transform(hat);
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        const double r2 = pos_norm_sq(g, idx);
        double w = std::exp(-r2 / (2.0 * spec.window_w * spec.window_w));
        if (spec.real_part) {
            u.values[flat] = cplx(u.values[flat].real() * w, 0.0);
        } else {
            u.values[flat] *= w;
        }
    });
    return u;
}

inline ComplexField bump(const Grid& g, const std::array<double, 3>& center, double width,
                         double amp, double chirp = 0.0) {
    ComplexField u = make_field(g);
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double d = g.position(idx[a]) - center[a];
            r2 += d * d;
        }
        const double env = amp * std::exp(-r2 / (2.0 * width * width));
        u.values[flat] = chirp == 0.0
                             ? cplx(env, 0.0)
                             : env * cplx(std::cos(chirp * r2), std::sin(chirp * r2));
    });
    return u;
}

// Radial real profile: a few Gaussian shells with seeded radii and weights.
inline ComplexField radial_shells(std::uint64_t seed, const Grid& g) {
    Rng rng(seed);
    const int shells = 3;
    std::array<double, 3> amp{}, rad{}, wid{};
    for (int i = 0; i < shells; ++i) {
        amp[i] = rng.gaussian();
        rad[i] = rng.uniform(0.0, 0.25 * g.half_length);
        wid[i] = rng.uniform(g.half_length / 16.0, g.half_length / 6.0);
    }
    ComplexField u = make_field(g);
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        const double r = std::sqrt(pos_norm_sq(g, idx));
        double s = 0.0;
        for (int i = 0; i < shells; ++i) {
            const double d = (r - rad[i]) / wid[i];
            s += amp[i] * std::exp(-0.5 * d * d);
        }
        u.values[flat] = cplx(s, 0.0);
    });
    return u;
}

// GRF samples for the given seeds plus the deterministic adversarial set.
inline std::vector<FamilySample> standard(const GrfSpec& spec,
                                          const std::vector<std::uint64_t>& seeds,
                                          bool with_adversarial = true) {
    std::vector<FamilySample> fam;
    for (std::uint64_t s : seeds)
        fam.push_back({s, [spec, s](const Grid& g) { return synthesize_grf(s, spec, g); }});
    if (with_adversarial) {
        const double L = spec.half_length;
        const double w = spec.window_w * 0.5;
        auto add = [&](std::uint64_t id, std::function<ComplexField(const Grid&)> fn) {
            fam.push_back({id, std::move(fn)});
        };
        add(9001, [w](const Grid& g) { return bump(g, {0, 0, 0}, w, 1.0); });
        add(9002, [w, L](const Grid& g) { return bump(g, {0.25 * L, 0, 0}, w, 1.0); });
        add(9003, [w](const Grid& g) { return bump(g, {0, 0, 0}, w, 1.0, 0.8); });
        add(9004, [w, L](const Grid& g) {
            ComplexField a = bump(g, {0.2 * L, 0, 0}, w, 1.0);
            ComplexField b = bump(g, {-0.2 * L, 0, 0}, w, 0.7);
            return a + b;
        });
        add(9005, [w, L](const Grid& g) {
            ComplexField a = bump(g, {0.1 * L, 0.1 * L, 0}, 0.7 * w, 1.0, -0.5);
            ComplexField b = bump(g, {-0.15 * L, 0, 0}, 1.3 * w, 0.5);
            return a + b;
        });
    }
    return fam;
}

}  // namespace family

namespace detail {

// Worst ratio over the family on one grid.
inline std::pair<double, std::uint64_t> scan_family(
    const std::vector<FamilySample>& fam, const Grid& g,
    const std::function<double(const ComplexField&, const Grid&)>& ratio_fn) {
    double worst = 0.0;
    std::uint64_t worst_id = 0;
    for (const FamilySample& s : fam) {
        const ComplexField u = s.realize(g);
        const double r = ratio_fn(u, g);
        if (std::isfinite(r) && r > worst) {
            worst = r;
            worst_id = s.id;
        }
    }
    return {worst, worst_id};
}

inline RatioReport run_checker(const std::string& id, const std::vector<FamilySample>& fam,
                               const Grid& g,
                               const std::function<double(const ComplexField&, const Grid&)>&
                                   ratio_fn) {
    RatioReport rep;
    rep.inequality_id = id;
    rep.samples = static_cast<int>(fam.size());
    rep.grid_dim = g.dim;
    rep.grid_points = g.points;
    rep.grid_half_length = g.half_length;
    auto [worst, seed] = scan_family(fam, g, ratio_fn);
    rep.worst_ratio = worst;
    rep.worst_case_seed = seed;
    const Grid fine = build_grid(g.dim, 2 * g.points, g.half_length);
    auto [worst_fine, seed_fine] = scan_family(fam, fine, ratio_fn);
    (void)seed_fine;
    rep.refinement_ratio = worst_fine / worst;
    return rep;
}

}  // namespace detail

// sup_x (|.|^{-gamma} * |u|^2)(x) <= C ||u||^2_{Hdot^{gamma/2}}.
inline RatioReport check_hardy(const std::vector<FamilySample>& fam, const Grid& g,
                               double gamma) {
    auto ratio = [gamma](const ComplexField& u, const Grid& grid) {
        PotentialSpec spec;
        spec.gamma = gamma;
        spec.lambda = 1;
        const HartreeKernel kernel = build_kernel(grid, spec);
        const std::vector<double> pot = hartree_potential(u, kernel);
        double sup = 0.0;
        for (double v : pot) sup = std::max(sup, v);
        const double h = sobolev_norm(u, 0.5 * gamma, SobolevVariant::homogeneous);
        return sup / (h * h);
    };
    return detail::run_checker("hardy", fam, g, ratio);
}

// ||K_gamma(|u|^2)||_inf <= C ||u||_{L^{2n/(n-gamma-eps)}} ||u||_{L^{2n/(n-gamma+eps)}}.
inline RatioReport check_kgamma_bound(const std::vector<FamilySample>& fam, const Grid& g,
                                      double gamma, double eps) {
    if (!(eps > 0.0) || eps >= g.dim - gamma)
        throw std::invalid_argument("kgamma bound: need 0 < eps < n - gamma");
    auto ratio = [gamma, eps](const ComplexField& u, const Grid& grid) {
        PotentialSpec spec;
        spec.gamma = gamma;
        spec.lambda = 1;
        const HartreeKernel kernel = build_kernel(grid, spec);
        const std::vector<double> pot = hartree_potential(u, kernel);
        double sup = 0.0;
        for (double v : pot) sup = std::max(sup, v);
        const double n = grid.dim;
        const double p1 = 2.0 * n / (n - gamma - eps);
        const double p2 = 2.0 * n / (n - gamma + eps);
        return sup / (lp_norm(u, p1) * lp_norm(u, p2));
    };
    return detail::run_checker("kgamma_bound", fam, g, ratio);
}

namespace detail {

// Cell average of |x|^{-e} over the origin cell, for weighted L^p quadrature.
inline double origin_weight_cell_average(const Grid& g, double e) {
    if (e <= 0.0) return 0.0;
    RadialProfile one;
    return std::pow(2.0 / g.spacing(), g.dim) *
           corner_integral(g.dim, 0.5 * g.spacing(), e, one);
}

// Grid quadrature of || |x|^{-beta} f ||_{L^p}; the origin cell uses the cell
// average of |x|^{-beta p}.
inline double weighted_lp_norm(const std::vector<double>& f, const Grid& g, double beta,
                               double p) {
    const double origin_avg = origin_weight_cell_average(g, beta * p);
    double acc = 0.0;
    for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
        const double r2 = pos_norm_sq(g, idx);
        const double w = r2 == 0.0 ? origin_avg : std::pow(r2, -0.5 * beta * p);
        acc += w * std::pow(std::abs(f[flat]), p);
    });
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

}  // namespace detail

// Stein-Weiss: || |x|^{-beta} (|.|^{-lambda} * f) ||_{L^p} <= C ||f||_{L^p},
// n = lambda + beta.
inline RatioReport check_stein_weiss(const std::vector<FamilySample>& fam, const Grid& g,
                                     double beta, double lambda_exp, double p) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("stein-weiss: need 1 < p < inf");
    if (!(lambda_exp > 0.0) || lambda_exp >= g.dim)
        throw std::invalid_argument("stein-weiss: need 0 < lambda < n");
    if (!(beta < g.dim / p)) throw std::invalid_argument("stein-weiss: need beta < n/p");
    if (std::abs(lambda_exp + beta - g.dim) > 1e-12)
        throw std::invalid_argument("stein-weiss: need n = lambda + beta");
    auto ratio = [beta, lambda_exp, p](const ComplexField& u, const Grid& grid) {
        PotentialSpec spec;
        spec.gamma = lambda_exp;
        spec.lambda = 1;
        const HartreeKernel kernel = build_kernel(grid, spec);
        std::vector<double> f(u.values.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = u.values[i].real();
        const std::vector<double> conv = convolve_kernel(kernel, f);
        double rhs = 0.0;
        for (double v : f) rhs += std::pow(std::abs(v), p);
        rhs = std::pow(rhs * grid.cell_volume(), 1.0 / p);
        return detail::weighted_lp_norm(conv, grid, beta, p) / rhs;
    };
    return detail::run_checker("stein_weiss", fam, g, ratio);
}

struct LeibnizSplit {
    double r = 2.0;
    double r1 = 4.0, q2 = 4.0; // 1/r = 1/r1 + 1/q2
    double q1 = 4.0, r2 = 4.0; // 1/r = 1/q1 + 1/r2
};

// Generalized Leibniz rule: ||D^s(uv)||_r <= C (||D^s u||_{r1} ||v||_{q2} +
// ||u||_{q1} ||D^s v||_{r2}); the second factor of the family enters through a
// deterministic perturbation of the seed.
inline RatioReport check_leibniz(const std::vector<FamilySample>& fam_u,
                                 const std::vector<FamilySample>& fam_v, const Grid& g,
                                 double s, const LeibnizSplit& split) {
    if (s < 0.0) throw std::invalid_argument("leibniz: need s >= 0");
    auto holder_ok = [](double r, double x, double y) {
        return std::abs(1.0 / r - 1.0 / x - 1.0 / y) < 1e-12;
    };
    if (!holder_ok(split.r, split.r1, split.q2) || !holder_ok(split.r, split.q1, split.r2))
        throw std::invalid_argument("leibniz: incompatible exponent split");
    if (fam_u.size() != fam_v.size()) throw std::invalid_argument("leibniz: family size mismatch");

    RatioReport rep;
    rep.inequality_id = "leibniz";
    rep.samples = static_cast<int>(fam_u.size());
    rep.grid_dim = g.dim;
    rep.grid_points = g.points;
    rep.grid_half_length = g.half_length;

    auto worst_on = [&](const Grid& grid) {
        const DispersionSymbol Ds = DispersionSymbol::homogeneous(grid, s);
        double worst = 0.0;
        std::uint64_t worst_id = 0;
        for (std::size_t i = 0; i < fam_u.size(); ++i) {
            const ComplexField u = fam_u[i].realize(grid);
            const ComplexField v = fam_v[i].realize(grid);
            ComplexField uv = u;
            for (std::size_t j = 0; j < uv.values.size(); ++j) uv.values[j] *= v.values[j];
            const double lhs = lp_norm(apply_symbol(uv, Ds), split.r);
            const double rhs = lp_norm(apply_symbol(u, Ds), split.r1) * lp_norm(v, split.q2) +
                               lp_norm(u, split.q1) * lp_norm(apply_symbol(v, Ds), split.r2);
            const double r = lhs / rhs;
            if (std::isfinite(r) && r > worst) {
                worst = r;
                worst_id = fam_u[i].id;
            }
        }
        return std::make_pair(worst, worst_id);
    };
    auto [worst, id] = worst_on(g);
    rep.worst_ratio = worst;
    rep.worst_case_seed = id;
    auto [worst_fine, id_fine] = worst_on(build_grid(g.dim, 2 * g.points, g.half_length));
    (void)id_fine;
    rep.refinement_ratio = worst_fine / worst;
    return rep;
}

// Sphere quadrature: uniform angles on S^1, Gauss-Legendre x uniform on S^2.
struct SphereQuadrature {
    std::vector<std::array<double, 3>> dirs;
    std::vector<double> weights; // sum to |S^{n-1}|
};

inline SphereQuadrature make_sphere_quadrature(int dim) {
    SphereQuadrature q;
    if (dim == 2) {
        const int M = 64;
        for (int i = 0; i < M; ++i) {
            const double th = 2.0 * kPi * (i + 0.5) / M;
            q.dirs.push_back({std::cos(th), std::sin(th), 0.0});
            q.weights.push_back(2.0 * kPi / M);
        }
    } else if (dim == 3) {
        const auto& gl = detail::gl16();
        const int Mphi = 32;
        for (int i = 0; i < 16; ++i) {
            const double ct = 2.0 * gl.x[i] - 1.0; // map [0,1] -> [-1,1]
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int j = 0; j < Mphi; ++j) {
                const double ph = 2.0 * kPi * (j + 0.5) / Mphi;
                q.dirs.push_back({st * std::cos(ph), st * std::sin(ph), ct});
                q.weights.push_back(2.0 * gl.w[i] * 2.0 * kPi / Mphi);
            }
        }
    } else {
        throw std::invalid_argument("sphere quadrature: dim must be 2 or 3");
    }
    return q;
}

namespace detail {

// Periodic multilinear interpolation of a complex field at an arbitrary point.
inline cplx interpolate(const ComplexField& u, const std::array<double, 3>& x) {
    const Grid& g = u.grid;
    const double h = g.spacing();
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> frac{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        double s = (x[a] + g.half_length) / h;
        double fl = std::floor(s);
        base[a] = static_cast<int>(fl);
        frac[a] = s - fl;
    }
    cplx acc(0, 0);
    const int corners = 1 << g.dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t index = 0;
        for (int a = 0; a < g.dim; ++a) {
            const int bit = (c >> a) & 1;
            const int ja = ((base[a] + bit) % g.points + g.points) % g.points;
            w *= bit ? frac[a] : 1.0 - frac[a];
            index = index * g.points + ja;
        }
        acc += w * u.values[index];
    }
    return acc;
}

}  // namespace detail

// Weighted convolution estimate (Lorentz sphere norm approximated by L^q):
// || |x|^{d1} (|x|^{-n/p-d2} * f) ||_{L^p} <= C || |x|^{-(d2-d1)} f ||_{L^1_r L^q_omega}.
inline RatioReport check_weighted_convolution(const std::vector<FamilySample>& fam,
                                              const Grid& g, double p, double q, double d1,
                                              double d2) {
    const int n = g.dim;
    if (n < 2) throw std::invalid_argument("weighted convolution: need n >= 2");
    const double pprime = std::isinf(p) ? 1.0 : p / (p - 1.0);
    if (!(d1 >= 0.0) || !(d1 < d2) || !(d2 < (n - 1) / pprime))
        throw std::invalid_argument("weighted convolution: need 0 <= d1 < d2 < (n-1)/p'");
    if (!(1.0 / q <= 1.0 - d2 / (n - 1) + 1e-12))
        throw std::invalid_argument("weighted convolution: need 1/q <= 1 - d2/(n-1)");
    const double kernel_exp = (std::isinf(p) ? 0.0 : n / p) + d2;
    if (!(kernel_exp > 0.0) || kernel_exp >= n)
        throw std::invalid_argument("weighted convolution: kernel exponent out of (0, n)");

    const SphereQuadrature sq = make_sphere_quadrature(n);
    auto ratio = [=](const ComplexField& u, const Grid& grid) {
        PotentialSpec spec;
        spec.gamma = kernel_exp;
        spec.lambda = 1;
        const HartreeKernel kernel = build_kernel(grid, spec);
        std::vector<double> f(u.values.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = u.values[i].real();
        const std::vector<double> conv = convolve_kernel(kernel, f);
        const double lhs = std::isinf(p)
                               ? [&] {
                                     double sup = 0.0;
                                     for_each_site(grid, [&](std::size_t fl,
                                                             const std::array<int, 3>& idx) {
                                         const double r2 = pos_norm_sq(grid, idx);
                                         if (r2 > 0.0)
                                             sup = std::max(sup, std::pow(r2, 0.5 * d1) *
                                                                     std::abs(conv[fl]));
                                     });
                                     return sup;
                                 }()
                               : detail::weighted_lp_norm(conv, grid, -d1, p);

        // RHS: int_0^R rho^{n-1} || rho^{-(d2-d1)} f(rho .) ||_{L^q_omega} drho.
        ComplexField fc = u;
        for (std::size_t i = 0; i < fc.values.size(); ++i) fc.values[i] = cplx(f[i], 0.0);
        const int n_rad = 2 * grid.points;
        const double R = grid.half_length;
        const double hrad = R / n_rad;
        double rhs = 0.0;
        for (int i = 0; i < n_rad; ++i) {
            const double rho = (i + 0.5) * hrad;
            double sphere;
            if (std::isinf(q)) {
                sphere = 0.0;
                for (std::size_t j = 0; j < sq.dirs.size(); ++j) {
                    std::array<double, 3> x{rho * sq.dirs[j][0], rho * sq.dirs[j][1],
                                            rho * sq.dirs[j][2]};
                    sphere = std::max(sphere, std::abs(detail::interpolate(fc, x)));
                }
            } else {
                double acc = 0.0;
                for (std::size_t j = 0; j < sq.dirs.size(); ++j) {
                    std::array<double, 3> x{rho * sq.dirs[j][0], rho * sq.dirs[j][1],
                                            rho * sq.dirs[j][2]};
                    acc += sq.weights[j] * std::pow(std::abs(detail::interpolate(fc, x)), q);
                }
                sphere = std::pow(acc, 1.0 / q);
            }
            rhs += hrad * std::pow(rho, n - 1.0 - (d2 - d1)) * sphere;
        }
        return lhs / rhs;
    };
    return detail::run_checker("weighted_convolution", fam, g, ratio);
}

// |<u, [ |x|^2 K_alpha(|u|^2), D_m^{2-alpha} ] u>| <= C ||u||_{L^2}^4 on the
// radial family; returns the worst ratio for one mass value.
inline RatioReport check_commutator(const std::vector<FamilySample>& fam, const Grid& g,
                                    double m, double alpha) {
    if (!(m > 0.0)) throw std::invalid_argument("commutator probe: need m > 0");
    if (!(alpha > 0.0) || alpha > 2.0)
        throw std::invalid_argument("commutator probe: need 0 < alpha <= 2");
    auto ratio = [m, alpha](const ComplexField& u, const Grid& grid) {
        PotentialSpec spec;
        spec.gamma = alpha;
        spec.lambda = -1;
        const HartreeKernel kernel = build_kernel(grid, spec);
        const DispersionSymbol D = DispersionSymbol::relativistic(grid, m, 2.0 - alpha);
        const std::vector<double> pot = hartree_potential(u, kernel);
        ComplexField fu = u; // f u with f = |x|^2 K_alpha(|u|^2)
        std::vector<double> fvals(u.values.size());
        for_each_site(grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
            fvals[flat] = pos_norm_sq(grid, idx) * pot[flat];
            fu.values[flat] *= fvals[flat];
        });
        ComplexField Du = apply_symbol(u, D);
        ComplexField Dfu = apply_symbol(fu, D);
        // [f, D]u = f (D u) - D (f u)
        cplx val(0, 0);
        for (std::size_t i = 0; i < u.values.size(); ++i)
            val += std::conj(u.values[i]) * (fvals[i] * Du.values[i] - Dfu.values[i]);
        val *= grid.cell_volume();
        const double mass = l2_norm_sq(u);
        return std::abs(val) / (mass * mass);
    };
    return detail::run_checker("commutator", fam, g, ratio);
}

// worst ratios across an m-sweep, stored in sweep_ratios; worst_ratio is the
// sweep maximum and refinement_ratio comes from the m = 1 member.
inline RatioReport check_commutator_sweep(const std::vector<FamilySample>& fam, const Grid& g,
                                          const std::vector<double>& masses, double alpha) {
    RatioReport rep;
    rep.inequality_id = "commutator_sweep";
    rep.samples = static_cast<int>(fam.size());
    rep.grid_dim = g.dim;
    rep.grid_points = g.points;
    rep.grid_half_length = g.half_length;
    double worst = 0.0;
    for (double m : masses) {
        RatioReport one = check_commutator(fam, g, m, alpha);
        rep.sweep_ratios.push_back(one.worst_ratio);
        if (one.worst_ratio > worst) {
            worst = one.worst_ratio;
            rep.worst_case_seed = one.worst_case_seed;
            rep.refinement_ratio = one.refinement_ratio;
        }
    }
    rep.worst_ratio = worst;
    return rep;
}

}  // namespace fhnls
