#pragma once

// Ground state Q of (-Laplace)^{alpha/2} Q - (|x|^{-gamma} * |Q|^2) Q = -Q by
// preconditioned descent on the Weinstein quotient
//
//     W(u) = (||u||^2_{Hdot^{alpha/2}})^{theta} (||u||^2_{L^2})^{2-theta} / |V_1(u)|,
//     theta = gamma / alpha,
//
// which is invariant under both amplitude and dilation for every admissible
// (alpha, gamma) and reduces to ||u||^2_{Hdot} ||u||^2_{L^2} / |V_1| in the
// mass-critical case gamma = alpha. After the flow converges the minimizer is
// rescaled in amplitude and in box length so that it satisfies the
// Euler-Lagrange equation with frequency -1; the returned field lives on the
// rescaled grid.

#include <cmath>
#include <stdexcept>

#include "fhnls/hartree.hpp"
#include "fhnls/observables.hpp"
#include "fhnls/spectral.hpp"

namespace fhnls {

struct GroundStateResult {
    ComplexField Q;            // real, nonnegative peak, radially decreasing
    double residual = 0.0;     // relative Euler-Lagrange defect
    double mass = 0.0;         // ||Q||^2_{L^2}
    double quotient_value = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

struct QuotientParts {
    double a = 0.0; // ||u||^2_{Hdot^{alpha/2}}
    double b = 0.0; // ||u||^2_{L^2}
    double v = 0.0; // |V_1(u)|
    double W = 0.0;
};

inline QuotientParts quotient_parts(const ComplexField& u, const ComplexField& u_hat,
                                    const std::vector<double>& hom_mult,
                                    const std::vector<double>& pot, double theta) {
    QuotientParts p;
    for (std::size_t i = 0; i < u_hat.values.size(); ++i)
        p.a += hom_mult[i] * std::norm(u_hat.values[i]);
    p.a /= u.grid.box_volume();
    p.b = l2_norm_sq(u);
    double v = 0.0;
    for (std::size_t i = 0; i < pot.size(); ++i) v += pot[i] * std::norm(u.values[i]);
    p.v = 0.25 * v * u.grid.cell_volume();
    p.W = std::pow(p.a, theta) * std::pow(p.b, 2.0 - theta) / p.v;
    return p;
}

}  // namespace detail

// Relative defect of (-Laplace)^{alpha/2} Q + Q - K(|Q|^2) Q on Q's own grid.
inline double ground_state_residual(const ComplexField& Q, double alpha,
                                    const HartreeKernel& kernel) {
    const DispersionSymbol lap = DispersionSymbol::homogeneous(Q.grid, alpha);
    ComplexField lhs = apply_symbol(Q, lap);
    const std::vector<double> pot = hartree_potential(Q, kernel);
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
        lhs.values[i] += Q.values[i] - pot[i] * Q.values[i];
    return l2_norm(lhs) / sobolev_norm(Q, alpha);
}

inline GroundStateResult solve_ground_state(const Grid& grid, double alpha, double gamma,
                                            double tol = 1e-7, int max_iter = 4000,
                                            const ComplexField* warm_start = nullptr) {
    if (!(alpha > 1.0) || alpha > 2.0)
        throw std::invalid_argument("ground state: need 1 < alpha <= 2");
    if (!(gamma > 0.0) || gamma >= grid.dim || gamma >= 2.0 * alpha)
        throw std::invalid_argument("ground state: need 0 < gamma < min(2 alpha, n)");
    const double theta = gamma / alpha;

    PotentialSpec spec;
    spec.gamma = gamma;
    spec.lambda = -1;
    const HartreeKernel kernel = build_kernel(grid, spec);

    const DispersionSymbol lap = DispersionSymbol::homogeneous(grid, alpha);
    std::vector<double> precond(grid.size());
    for (std::size_t i = 0; i < precond.size(); ++i) precond[i] = 1.0 / (1.0 + lap.multiplier[i]);

    // Unit-mass Gaussian of width L/6 unless warm-started.
    ComplexField u = warm_start ? *warm_start
                                : sample(grid, [&](const std::array<double, 3>& x) {
                                      double r2 = 0.0;
                                      for (int a = 0; a < grid.dim; ++a) r2 += x[a] * x[a];
                                      const double w = grid.half_length / 6.0;
                                      return cplx(std::exp(-r2 / (2.0 * w * w)), 0.0);
                                  });
    {
        const double nrm = l2_norm(u);
        if (!(nrm > 0.0)) throw std::runtime_error("ground state: zero initial guess");
        for (cplx& v : u.values) v = cplx(v.real() / nrm, 0.0);
    }

    ComplexField u_hat = transform(u);
    std::vector<double> pot = hartree_potential(u, kernel);
    detail::QuotientParts p = detail::quotient_parts(u, u_hat, lap.multiplier, pot, theta);

    int iter = 0;
    bool converged = false;
    double tau = 1.0;
    int stagnant = 0;
    for (; iter < max_iter; ++iter) {
        // Gradient of W at u (up to the positive factor 2W): theta/a L u +
        // (2-theta)/b u - 1/(2v) K(|u|^2) u, preconditioned by (1 + |xi|^alpha)^-1.
        ComplexField grad_hat = u_hat;
        for (std::size_t i = 0; i < grad_hat.values.size(); ++i)
            grad_hat.values[i] *= theta / p.a * lap.multiplier[i];
        ComplexField rest = u;
        for (std::size_t i = 0; i < rest.values.size(); ++i)
            rest.values[i] = (2.0 - theta) / p.b * u.values[i] -
                             0.5 / p.v * pot[i] * u.values[i];
        ComplexField rest_hat = transform(rest);
        for (std::size_t i = 0; i < grad_hat.values.size(); ++i) {
            grad_hat.values[i] = (grad_hat.values[i] + rest_hat.values[i]) * precond[i];
        }
        ComplexField dir = inverse_transform(grad_hat);

        // Backtracking line search on W; direction is -dir.
        bool accepted = false;
        double trial_tau = std::min(4.0 * tau, 1.0e3);
        for (int k = 0; k < 60; ++k) {
            ComplexField cand = u;
            for (std::size_t i = 0; i < cand.values.size(); ++i)
                cand.values[i] = cplx(u.values[i].real() - trial_tau * dir.values[i].real(), 0.0);
            const double nrm = l2_norm(cand);
            if (nrm > 1e-14) {
                for (cplx& v : cand.values) v /= nrm;
                ComplexField cand_hat = transform(cand);
                std::vector<double> cand_pot = hartree_potential(cand, kernel);
                detail::QuotientParts q =
                    detail::quotient_parts(cand, cand_hat, lap.multiplier, cand_pot, theta);
                if (std::isfinite(q.W) && q.W < p.W) {
                    const double rel_drop = (p.W - q.W) / p.W;
                    u = std::move(cand);
                    u_hat = std::move(cand_hat);
                    pot = std::move(cand_pot);
                    p = q;
                    tau = trial_tau;
                    accepted = true;
                    stagnant = rel_drop < 1e-14 ? stagnant + 1 : 0;
                    break;
                }
            }
            trial_tau *= 0.5;
        }
        if (!accepted || stagnant >= 4) {
            converged = accepted || iter > 0;
            break;
        }
    }
    if (!(p.b > 0.0) || !std::isfinite(p.W))
        throw std::runtime_error("ground state: flow collapsed (bad step size)");

    // Rescale so the Euler-Lagrange equation holds with frequency -1:
    // Q = A U(./B) realised by relabelling the box length to B*L.
    const double B = std::pow((2.0 - theta) * p.a / (theta * p.b), 1.0 / alpha);
    const double A2 = p.a / (2.0 * theta * p.v) * std::pow(B, gamma - alpha - grid.dim);
    const double A = std::sqrt(A2);

    GroundStateResult result;
    result.Q.grid = Grid{grid.dim, grid.points, grid.half_length * B};
    result.Q.space = Space::physical;
    result.Q.values.resize(grid.size());
    for (std::size_t i = 0; i < result.Q.values.size(); ++i)
        result.Q.values[i] = cplx(A * u.values[i].real(), 0.0);

    // Sign normalization: peak positive.
    double peak = 0.0;
    bool flip = false;
    for (const cplx& v : result.Q.values)
        if (std::abs(v.real()) > peak) {
            peak = std::abs(v.real());
            flip = v.real() < 0.0;
        }
    if (flip)
        for (cplx& v : result.Q.values) v = -v;

    const HartreeKernel scaled_kernel = build_kernel(result.Q.grid, spec);
    result.residual = ground_state_residual(result.Q, alpha, scaled_kernel);
    result.mass = l2_norm_sq(result.Q);
    result.quotient_value = p.W;
    result.iterations = iter;
    result.converged = converged && result.residual < std::max(tol, 1e-12);
    return result;
}

// ||Q||_{L^2} / sqrt(sup psi): the focusing mass-critical global-existence
// threshold.
inline double critical_mass_threshold(const GroundStateResult& result, double psi_sup) {
    if (!(psi_sup > 0.0)) throw std::invalid_argument("threshold: psi_sup must be positive");
    return std::sqrt(result.mass) / std::sqrt(psi_sup);
}

// J(u) = |V(u)| / (||u||_{Hdot^{alpha/2}}^{2 gamma/alpha} ||u||_{L^2}^{2(2-gamma/alpha)});
// scale- and modulus-invariant.
inline double quotient_J(const ComplexField& u, double alpha, double gamma,
                         const HartreeKernel& kernel) {
    const double b = l2_norm_sq(u);
    if (!(b > 0.0)) throw std::invalid_argument("quotient_J: zero input");
    const double a = std::pow(sobolev_norm(u, 0.5 * alpha, SobolevVariant::homogeneous), 2.0);
    const double V = potential_energy(u, kernel);
    const double theta = gamma / alpha;
    return std::abs(V) / (std::pow(a, theta) * std::pow(b, 2.0 - theta));
}

}  // namespace fhnls
