#pragma once

// Diagnostics: conserved quantities, virial functionals, moments, the blowup
// parabola, Strichartz-norm accumulation and the scattering construction.
// Position weights use the untranslated box coordinate, so data should be
// centered (virial identities assume decay away from the origin).

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fhnls/field.hpp"
#include "fhnls/hartree.hpp"
#include "fhnls/spectral.hpp"

namespace fhnls {

struct ObservableRecord {
    double t = 0.0;
    double mass = 0.0;            // ||u||^2_{L^2}
    double kinetic = 0.0;         // K(u) = (1/2) <D_m^alpha u, u>
    double potential = 0.0;       // V(u)
    double energy = 0.0;          // K + V
    double h_gamma_half = 0.0;    // ||u||_{H^{gamma/2}}
    double dilation_virial = 0.0; // <u, A u>
    double weighted_virial = 0.0; // <u, M u> >= 0
    double moment2 = 0.0;         // ||x u||^2
    double grad_moment = 0.0;     // || |x| grad u ||
    std::map<std::string, double> extra;
};

struct EnergyParts {
    double kinetic = 0.0, potential = 0.0, total = 0.0;
};

inline EnergyParts energy(const ComplexField& u, const DispersionSymbol& dispersion,
                          const HartreeKernel* kernel) {
    require_same_grid(u.grid, dispersion.grid);
    ComplexField hat = u.space == Space::frequency ? u : transform(u);
    double kin = 0.0;
    for (std::size_t i = 0; i < hat.values.size(); ++i)
        kin += dispersion.multiplier[i] * std::norm(hat.values[i]);
    kin = 0.5 * kin / u.grid.box_volume();
    const double pot = kernel ? potential_energy(u, *kernel) : 0.0;
    return EnergyParts{kin, pot, kin + pot};
}

// <u, A u> with A = -(i/2)(grad.x + x.grad), evaluated as Im int conj(u)
// (x.grad u) dx with the spectral gradient; real by construction.
inline double dilation_virial(const ComplexField& u) {
    ComplexField hat = transform(u);
    double acc = 0.0;
    for (int axis = 0; axis < u.grid.dim; ++axis) {
        ComplexField du = spectral_derivative(hat, axis); // frequency in/out
        du = inverse_transform(du);
        for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
            const double x = u.grid.position(idx[axis]);
            acc += x * (std::conj(u.values[flat]) * du.values[flat]).imag();
        });
    }
    return acc * u.grid.cell_volume();
}

// <u, M u> = sum_k ||D_m^{(2-alpha)/2} (x_k u)||^2 >= 0.
inline double weighted_virial(const ComplexField& u, double m, double alpha) {
    const DispersionSymbol half =
        DispersionSymbol::relativistic(u.grid, m, 0.5 * (2.0 - alpha));
    double acc = 0.0;
    for (int axis = 0; axis < u.grid.dim; ++axis) {
        ComplexField xu = u;
        for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
            xu.values[flat] *= u.grid.position(idx[axis]);
        });
        acc += l2_norm_sq(apply_symbol(xu, half));
    }
    return acc;
}

inline double moment2(const ComplexField& u) {
    double acc = 0.0;
    for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
        acc += pos_norm_sq(u.grid, idx) * std::norm(u.values[flat]);
    });
    return acc * u.grid.cell_volume();
}

inline double grad_moment(const ComplexField& u) {
    ComplexField hat = transform(u);
    double acc = 0.0;
    for (int axis = 0; axis < u.grid.dim; ++axis) {
        ComplexField du = inverse_transform(spectral_derivative(hat, axis));
        for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
            acc += pos_norm_sq(u.grid, idx) * std::norm(du.values[flat]);
        });
    }
    return std::sqrt(acc * u.grid.cell_volume());
}

// |centroid| of the mass density, for the centering warning.
inline double mass_centroid_norm(const ComplexField& u) {
    double total = 0.0;
    std::array<double, 3> c{0, 0, 0};
    for_each_site(u.grid, [&](std::size_t flat, const std::array<int, 3>& idx) {
        const double w = std::norm(u.values[flat]);
        total += w;
        for (int a = 0; a < u.grid.dim; ++a) c[a] += w * u.grid.position(idx[a]);
    });
    if (total == 0.0) return 0.0;
    double s = 0.0;
    for (int a = 0; a < u.grid.dim; ++a) s += (c[a] / total) * (c[a] / total);
    return std::sqrt(s);
}

// Bundles the pieces needed to fill an ObservableRecord for one physics setup.
struct ObservableSet {
    DispersionSymbol dispersion;
    const HartreeKernel* kernel = nullptr;
    double m = 0.0;
    double alpha = 2.0;
    double gamma = 1.0;

    ObservableRecord record(const ComplexField& u, double t) const {
        ObservableRecord r;
        r.t = t;
        r.mass = l2_norm_sq(u);
        const EnergyParts e = energy(u, dispersion, kernel);
        r.kinetic = e.kinetic;
        r.potential = e.potential;
        r.energy = e.total;
        r.h_gamma_half = sobolev_norm(u, 0.5 * gamma);
        r.dilation_virial = dilation_virial(u);
        r.weighted_virial = weighted_virial(u, m, alpha);
        r.moment2 = moment2(u);
        r.grad_moment = grad_moment(u);
        return r;
    }
};

// Smallest positive root of 2 alpha^2 E t^2 + 2 alpha (A + C ||phi||^4) t + M,
// or nullopt when no positive root exists.
inline std::optional<double> parabola_root(double E_phi, double A_phi, double M_phi,
                                           double alpha, double C, double l2_norm_phi_4) {
    const double a = 2.0 * alpha * alpha * E_phi;
    const double b = 2.0 * alpha * (A_phi + C * l2_norm_phi_4);
    const double c = M_phi;
    if (a == 0.0) {
        if (b == 0.0) return std::nullopt;
        const double t = -c / b;
        return t > 0.0 ? std::optional<double>(t) : std::nullopt;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double r1 = (-b - sq) / (2.0 * a);
    const double r2 = (-b + sq) / (2.0 * a);
    const double lo = std::min(r1, r2), hi = std::max(r1, r2);
    if (lo > 0.0) return lo;
    if (hi > 0.0) return hi;
    return std::nullopt;
}

struct VirialReport {
    int samples = 0;
    double cadence = 0.0;
    // max_t [ d/dt <u,Au> - 2 alpha E(phi) ]
    double max_dilation_residual = 0.0;
    // max_t [ d/dt <u,Mu> - 2 alpha <u,Au> ] / ||phi||^4
    double fitted_C = 0.0;
    // max_t d^2/dt^2 <u,Mu>
    double max_second_difference = 0.0;
};

// Central finite differences of the two virials on a uniform-cadence record
// series. Refuses fewer than 16 samples.
inline VirialReport virial_inequality_residuals(const std::vector<ObservableRecord>& traj,
                                                double E_phi, double alpha, double mass_phi) {
    if (traj.size() < 16)
        throw std::invalid_argument("virial residuals: need at least 16 samples");
    const double dt = traj[1].t - traj[0].t;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double step = traj[i + 1].t - traj[i].t;
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("virial residuals: cadence is not uniform");
    }
    VirialReport rep;
    rep.samples = static_cast<int>(traj.size());
    rep.cadence = dt;
    double worst_a = -std::numeric_limits<double>::infinity();
    double worst_c = -std::numeric_limits<double>::infinity();
    double worst_m2 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double dA = (traj[i + 1].dilation_virial - traj[i - 1].dilation_virial) / (2 * dt);
        const double dM = (traj[i + 1].weighted_virial - traj[i - 1].weighted_virial) / (2 * dt);
        const double d2M = (traj[i + 1].weighted_virial - 2.0 * traj[i].weighted_virial +
                            traj[i - 1].weighted_virial) /
                           (dt * dt);
        worst_a = std::max(worst_a, dA - 2.0 * alpha * E_phi);
        worst_c = std::max(worst_c, dM - 2.0 * alpha * traj[i].dilation_virial);
        worst_m2 = std::max(worst_m2, d2M);
    }
    rep.max_dilation_residual = worst_a;
    rep.fitted_C = worst_c / (mass_phi * mass_phi);
    rep.max_second_difference = worst_m2;
    return rep;
}

// Trapezoid accumulation of ||u(t)||^q in time, with an optional inhomogeneous
// Sobolev index on the spatial L^r norm.
struct StrichartzAccumulator {
    double q = 2.0;
    double r = 2.0;
    std::optional<double> sobolev_s;

    double integral = 0.0;
    double sup_norm = 0.0; // used when q = infinity
    bool started = false;
    double t_last = 0.0;
    double f_last = 0.0;

    double spatial_norm(const ComplexField& u) const {
        if (!sobolev_s) return lp_norm(u, r);
        const DispersionSymbol bessel =
            DispersionSymbol::relativistic(u.grid, 1.0, *sobolev_s);
        return lp_norm(apply_symbol(u, bessel), r);
    }

    void update(const ComplexField& u, double t) {
        const double f = spatial_norm(u);
        sup_norm = std::max(sup_norm, f);
        if (!started) {
            started = true;
        } else {
            if (t <= t_last)
                throw std::invalid_argument("strichartz: time must be strictly increasing");
            if (!std::isinf(q))
                integral += 0.5 * (std::pow(f, q) + std::pow(f_last, q)) * (t - t_last);
        }
        t_last = t;
        f_last = f;
    }

    double value() const {
        if (std::isinf(q)) return sup_norm;
        return std::pow(integral, 1.0 / q);
    }
};

// phi^+ = phi - i int_0^Tmax U(-t') F(t') dt' by trapezoid quadrature over
// uniformly spaced nonlinearity snapshots. Needs at least 16 snapshots.
inline ComplexField scattering_state(const std::vector<double>& times,
                                     const std::vector<ComplexField>& F_snapshots,
                                     const ComplexField& phi,
                                     const DispersionSymbol& dispersion) {
    if (times.size() != F_snapshots.size() || times.size() < 16)
        throw std::invalid_argument("scattering_state: need at least 16 aligned snapshots");
    ComplexField acc = make_field(phi.grid, Space::frequency);
    for (std::size_t i = 0; i < times.size(); ++i) {
        ComplexField fhat = transform(F_snapshots[i]);
        const double w =
            (i == 0 ? 0.5 * (times[1] - times[0])
                    : (i + 1 == times.size() ? 0.5 * (times[i] - times[i - 1])
                                             : 0.5 * (times[i + 1] - times[i - 1])));
        for (std::size_t j = 0; j < acc.values.size(); ++j) {
            const double phase = times[i] * dispersion.multiplier[j]; // U(-t')
            acc.values[j] += w * cplx(std::cos(phase), std::sin(phase)) * fhat.values[j];
        }
    }
    ComplexField phi_hat = transform(phi);
    for (std::size_t j = 0; j < phi_hat.values.size(); ++j)
        phi_hat.values[j] -= cplx(0.0, 1.0) * acc.values[j];
    return inverse_transform(phi_hat);
}

// ||u(t) - U(t) phi^+||_{H^s}.
inline double scattering_defect(const ComplexField& u_t, double t, const ComplexField& phi_plus,
                                const DispersionSymbol& dispersion, double s) {
    ComplexField diff = u_t;
    ComplexField flow = phi_plus;
    // U(t) phi^+ in frequency space
    ComplexField hat = transform(flow);
    for (std::size_t j = 0; j < hat.values.size(); ++j) {
        const double phase = -t * dispersion.multiplier[j];
        hat.values[j] *= cplx(std::cos(phase), std::sin(phase));
    }
    flow = inverse_transform(hat);
    for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= flow.values[j];
    return sobolev_norm(diff, s);
}

}  // namespace fhnls
