#pragma once

// Time evolution for i u_t = D_m^alpha u + F(u): exact free flow in Fourier
// space and second-order Strang splitting. Both substeps are unitary (the
// free multiplier is unimodular; the Hartree potential is real and pointwise
// |u|-preserving), so mass is conserved to roundoff.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fhnls/field.hpp"
#include "fhnls/hartree.hpp"
#include "fhnls/spectral.hpp"

namespace fhnls {

// U(t) u = exp(-i t sigma(xi)) u_hat, exactly unitary.
inline ComplexField free_evolve(const ComplexField& u, double t, const DispersionSymbol& sym) {
    require_same_grid(u.grid, sym.grid);
    ComplexField hat = transform(u);
    for (std::size_t i = 0; i < hat.values.size(); ++i) {
        const double phase = -t * sym.multiplier[i];
        hat.values[i] *= cplx(std::cos(phase), std::sin(phase));
    }
    return inverse_transform(hat);
}

// e^{i t m^alpha} u, the modulation linking the relativistic flow to the
// zero-shifted one.
inline ComplexField phase_modulate(const ComplexField& u, double t, double m, double alpha) {
    const double phase = t * std::pow(m, alpha);
    return cplx(std::cos(phase), std::sin(phase)) * u;
}

enum class RunStatus { Completed, Blowup, StalledNearSingularity, NumericalInstability };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "Completed";
        case RunStatus::Blowup: return "Blowup";
        case RunStatus::StalledNearSingularity: return "StalledNearSingularity";
        case RunStatus::NumericalInstability: return "NumericalInstability";
    }
    return "Unknown";
}

struct StepController {
    bool adaptive = false;
    double dt = 1e-3;
    double energy_tol = 1e-6; // adaptive only: per-step energy change budget
    double dt_min = 1e-8;
    double dt_max = 1e-2;
    // Numerical blowup is declared when ||u||_{H^{gamma/2}} crosses this
    // multiple of its initial value.
    double blowup_threshold = 1e3;

    static StepController fixed(double dt) {
        StepController c;
        c.adaptive = false;
        c.dt = dt;
        return c;
    }
    static StepController adaptive_steps(double energy_tol, double dt_min, double dt_max) {
        StepController c;
        c.adaptive = true;
        c.energy_tol = energy_tol;
        c.dt_min = dt_min;
        c.dt_max = dt_max;
        c.dt = dt_max;
        return c;
    }
};

struct EvolutionState {
    ComplexField u;
    double t = 0.0;
    double dt = 1e-3;
    DispersionSymbol dispersion;
    const HartreeKernel* kernel = nullptr; // null or psi == 0 table means free flow
    long step_count = 0;
};

inline bool finite(const ComplexField& u) {
    for (const cplx& v : u.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// One Strang step: half free flow, exact Hartree phase rotation, half free
// flow. The potential is evaluated once at the substep start; |u| is
// invariant under the rotation, so the substep is exact.
inline void strang_step(EvolutionState& state, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("strang_step: dt must be positive");
    state.u = free_evolve(state.u, 0.5 * dt, state.dispersion);
    if (state.kernel != nullptr) {
        const std::vector<double> pot = hartree_potential(state.u, *state.kernel);
        const double lam = static_cast<double>(state.kernel->spec.lambda);
        for (std::size_t i = 0; i < state.u.values.size(); ++i) {
            const double phase = -dt * lam * pot[i];
            state.u.values[i] *= cplx(std::cos(phase), std::sin(phase));
        }
    }
    state.u = free_evolve(state.u, 0.5 * dt, state.dispersion);
    state.t += dt;
    state.step_count += 1;
}

struct TrajectorySummary {
    RunStatus status = RunStatus::Completed;
    double t_end = 0.0;
    long steps = 0;
    double final_dt = 0.0;
    double blowup_norm_ratio = 0.0; // H^{gamma/2} norm over its initial value
};

using Observer = std::function<void(const EvolutionState&)>;

// Steps the state to t_final, invoking the observers every observe_every
// accepted steps (and at the final time). In adaptive mode a step whose
// energy change exceeds energy_tol is rejected and retried with dt/2; after
// ten accepted steps dt doubles, capped at dt_max. Terminates early with
// Blowup when the H^{gamma/2} norm passes controller.blowup_threshold times
// its initial value.
inline TrajectorySummary evolve(EvolutionState& state, double t_final,
                                const StepController& controller,
                                const std::vector<Observer>& observers = {},
                                int observe_every = 10) {
    if (!(t_final > state.t)) throw std::invalid_argument("evolve: t_final must exceed state.t");
    const double gamma_half = state.kernel ? 0.5 * state.kernel->spec.gamma : 0.5;
    const double initial_norm = sobolev_norm(state.u, gamma_half);

    auto energy_of = [&](const ComplexField& u) {
        ComplexField hat = transform(u);
        double kin = 0.0;
        for (std::size_t i = 0; i < hat.values.size(); ++i)
            kin += state.dispersion.multiplier[i] * std::norm(hat.values[i]);
        kin = 0.5 * kin / u.grid.box_volume();
        const double pot = state.kernel ? potential_energy(u, *state.kernel) : 0.0;
        return kin + pot;
    };

    double dt = controller.dt;
    double last_energy = controller.adaptive ? energy_of(state.u) : 0.0;
    int accepted_since_change = 0;
    int steps_since_observe = 0;

    TrajectorySummary summary;
    for (const Observer& obs : observers) obs(state);

    const double tiny = 1e-12 * std::max(1.0, std::abs(t_final));
    while (state.t < t_final - tiny) {
        const double step_dt = std::min(dt, t_final - state.t);

        if (!controller.adaptive) {
            strang_step(state, step_dt);
        } else {
            ComplexField saved = state.u;
            const double saved_t = state.t;
            const long saved_count = state.step_count;
            strang_step(state, step_dt);
            const double e = energy_of(state.u);
            if (std::abs(e - last_energy) > controller.energy_tol && finite(state.u)) {
                state.u = std::move(saved);
                state.t = saved_t;
                state.step_count = saved_count;
                dt *= 0.5;
                accepted_since_change = 0;
                if (dt < controller.dt_min) {
                    summary.status = RunStatus::StalledNearSingularity;
                    break;
                }
                continue;
            }
            last_energy = e;
            if (++accepted_since_change >= 10) {
                dt = std::min(2.0 * dt, controller.dt_max);
                accepted_since_change = 0;
            }
        }

        if (!finite(state.u)) {
            summary.status = RunStatus::NumericalInstability;
            break;
        }

        const double ratio = sobolev_norm(state.u, gamma_half) / initial_norm;
        summary.blowup_norm_ratio = std::max(summary.blowup_norm_ratio, ratio);
        bool final_point = state.t >= t_final - tiny;
        if (++steps_since_observe >= observe_every || final_point ||
            ratio > controller.blowup_threshold) {
            for (const Observer& obs : observers) obs(state);
            steps_since_observe = 0;
        }
        if (ratio > controller.blowup_threshold) {
            summary.status = RunStatus::Blowup;
            break;
        }
    }

    state.dt = dt;
    summary.t_end = state.t;
    summary.steps = state.step_count;
    summary.final_dt = dt;
    return summary;
}

}  // namespace fhnls
