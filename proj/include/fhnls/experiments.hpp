#pragma once

// Config-driven experiments: evolution with diagnostics, the mass-threshold
// dichotomy, blowup scans, scattering construction, the two dispersion-limit
// studies, ground-state solves and the inequality suite. Each experiment
// returns its numbers in a result struct and, when an output directory is
// set, emits the observable CSV, checkpoints and a JSON manifest.

#include <filesystem>
#include <sstream>
#include <thread>

#include "fhnls/checkpoint.hpp"
#include "fhnls/config.hpp"
#include "fhnls/ground_state.hpp"
#include "fhnls/inequality.hpp"
#include "fhnls/io.hpp"
#include "fhnls/propagator.hpp"
#include "fhnls/resample.hpp"

namespace fhnls {

struct PhysicsSetup {
    Grid grid;
    DispersionSymbol dispersion;
    std::optional<HartreeKernel> kernel; // nullopt = free flow (psi = "zero")
    ObservableSet observables;

    const HartreeKernel* kernel_ptr() const { return kernel ? &*kernel : nullptr; }
};

inline PhysicsSetup make_physics(const ExperimentConfig& cfg) {
    PhysicsSetup s{build_grid(cfg.grid_dim, cfg.grid_points, cfg.grid_half_length),
                   DispersionSymbol::relativistic(
                       build_grid(cfg.grid_dim, cfg.grid_points, cfg.grid_half_length), cfg.m,
                       cfg.alpha),
                   std::nullopt,
                   {}};
    if (cfg.psi != "zero") {
        PotentialSpec spec;
        spec.gamma = cfg.gamma;
        spec.lambda = cfg.lambda;
        if (cfg.psi != "one") spec.psi = load_psi_table(cfg.psi);
        s.kernel = build_kernel(s.grid, spec);
    }
    s.observables =
        ObservableSet{s.dispersion, s.kernel_ptr(), cfg.m, cfg.alpha, cfg.gamma};
    return s;
}

inline ComplexField gaussian_data(const Grid& g, double width, double amplitude, double chirp,
                                  const std::vector<double>& center) {
    return sample(g, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double c = a < static_cast<int>(center.size()) ? center[a] : 0.0;
            const double d = x[a] - c;
            r2 += d * d;
        }
        const double env = amplitude * std::exp(-r2 / (2.0 * width * width));
        return chirp == 0.0 ? cplx(env, 0.0)
                            : env * cplx(std::cos(chirp * r2), std::sin(chirp * r2));
    });
}

// Ground-state profile resampled onto the target grid and rescaled to the
// requested squared L^2 norm.
inline ComplexField ground_state_data(const ExperimentConfig& cfg, const Grid& g,
                                      double target_mass) {
    const int solver_points = std::min(g.points, 128);
    const Grid solver_grid = build_grid(g.dim, solver_points, g.half_length);
    GroundStateResult gs = solve_ground_state(solver_grid, cfg.alpha, cfg.gamma);
    ComplexField phi = resample(gs.Q, g);
    const double mass = l2_norm_sq(phi);
    const double scale = std::sqrt(target_mass / mass);
    for (cplx& v : phi.values) v *= scale;
    return phi;
}

inline ComplexField make_initial(const ExperimentConfig& cfg, const Grid& g) {
    switch (cfg.initial.kind) {
        case InitialKind::gaussian:
            return gaussian_data(g, cfg.initial.width, cfg.initial.amplitude, cfg.initial.chirp,
                                 cfg.initial.center);
        case InitialKind::plane_modulated: {
            ComplexField env = gaussian_data(g, cfg.initial.width, cfg.initial.amplitude,
                                             cfg.initial.chirp, cfg.initial.center);
            ComplexField u = make_field(g);
            for_each_site(g, [&](std::size_t flat, const std::array<int, 3>& idx) {
                double phase = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const int mode =
                        a < static_cast<int>(cfg.initial.wave.size()) ? cfg.initial.wave[a] : 0;
                    phase += g.freq_step() * mode * g.position(idx[a]);
                }
                u.values[flat] = env.values[flat] * cplx(std::cos(phase), std::sin(phase));
            });
            return u;
        }
        case InitialKind::from_checkpoint: {
            Checkpoint ck = load_checkpoint(cfg.initial.checkpoint);
            if (!(ck.u.grid == g))
                throw std::invalid_argument("initial.checkpoint: grid mismatch with config");
            return ck.u;
        }
        case InitialKind::ground_state_rescaled:
            return ground_state_data(cfg, g, cfg.initial.mass);
    }
    throw std::logic_error("unreachable initial kind");
}

inline StepController controller_from(const ExperimentConfig& cfg) {
    StepController c;
    c.adaptive = cfg.adaptive;
    c.dt = cfg.dt;
    c.energy_tol = cfg.energy_tol;
    c.dt_min = cfg.dt_min;
    c.dt_max = cfg.adaptive ? cfg.dt_max : cfg.dt;
    c.blowup_threshold = cfg.blowup_threshold;
    return c;
}

struct EvolutionResult {
    TrajectorySummary summary;
    std::vector<ObservableRecord> records;
    ComplexField final_u;
    double free_flow_defect = -1.0; // psi = "zero" runs only
};

// Shared evolution driver: records observables on the configured cadence.
inline EvolutionResult run_evolution(const ExperimentConfig& cfg, const PhysicsSetup& phys,
                                     const ComplexField& phi) {
    EvolutionState state{phi, 0.0, cfg.dt, phys.dispersion, phys.kernel_ptr(), 0};
    EvolutionResult result;
    std::vector<Observer> observers;
    observers.push_back([&](const EvolutionState& s) {
        result.records.push_back(phys.observables.record(s.u, s.t));
    });
    if (mass_centroid_norm(phi) > 0.1 * phys.grid.half_length)
        std::fprintf(stderr,
                     "warning: initial data centroid exceeds L/10; virial diagnostics assume "
                     "centered data\n");
    result.summary = evolve(state, cfg.t_final, controller_from(cfg), observers,
                            cfg.observer_cadence);
    result.final_u = state.u;
    if (cfg.psi == "zero") {
        const ComplexField exact = free_evolve(phi, state.t, phys.dispersion);
        result.free_flow_defect = l2_norm(exact - state.u);
    }
    return result;
}

namespace detail {

inline RunManifest start_manifest(const ExperimentConfig& cfg) {
    RunManifest m;
    std::ostringstream h;
    h << std::hex << config_hash(cfg);
    m.config_hash = h.str();
    m.started = timestamp_now();
    return m;
}

inline void finish_manifest(const ExperimentConfig& cfg, RunManifest& m) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    m.finished = timestamp_now();
    write_manifest((fs::path(cfg.output_dir) / "manifest.json").string(), m);
}

inline std::string emit_csv(const ExperimentConfig& cfg, RunManifest& m, const std::string& name,
                            const std::vector<ObservableRecord>& records) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const std::string path = (fs::path(cfg.output_dir) / name).string();
    write_observables_csv(path, records);
    m.emitted.push_back(path);
    return path;
}

inline std::string emit_checkpoint(const ExperimentConfig& cfg, RunManifest& m,
                                   const std::string& name, const ComplexField& u, double t,
                                   double dt) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const std::string path = (fs::path(cfg.output_dir) / name).string();
    Checkpoint ck;
    ck.u = u;
    ck.t = t;
    ck.dt = dt;
    ck.m = cfg.m;
    ck.alpha = cfg.alpha;
    ck.gamma = cfg.gamma;
    ck.lambda = static_cast<std::int8_t>(cfg.lambda);
    save_checkpoint(path, ck);
    m.emitted.push_back(path);
    return path;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

inline EvolutionResult experiment_evolve(const ExperimentConfig& cfg) {
    const PhysicsSetup phys = make_physics(cfg);
    const ComplexField phi = make_initial(cfg, phys.grid);
    EvolutionResult res = run_evolution(cfg, phys, phi);
    if (!cfg.output_dir.empty()) {
        RunManifest m = detail::start_manifest(cfg);
        detail::emit_csv(cfg, m, "observables.csv", res.records);
        detail::emit_checkpoint(cfg, m, "final.ck", res.final_u, res.summary.t_end,
                                res.summary.final_dt);
        m.status = to_string(res.summary.status);
        m.extra["t_end"] = res.summary.t_end;
        m.extra["steps"] = res.summary.steps;
        m.extra["blowup_norm_ratio"] = res.summary.blowup_norm_ratio;
        if (res.free_flow_defect >= 0.0) m.extra["free_flow_defect"] = res.free_flow_defect;
        detail::finish_manifest(cfg, m);
    }
    return res;
}

// ---------------------------------------------------------------------------
// mass_threshold: sub-threshold profile completes, negative-energy rescale
// blows up before twice the parabola root.
// ---------------------------------------------------------------------------

struct MassThresholdResult {
    double threshold = 0.0;       // ||Q||_{L^2} / sqrt(sup psi)
    double gs_residual = 0.0;
    TrajectorySummary sub_summary;
    double sub_hdot_growth = 0.0; // max ||u||_{Hdot^{alpha/2}} over initial
    TrajectorySummary super_summary;
    double super_energy = 0.0;
    double super_dilation = 0.0;
    double super_weighted = 0.0;
    double calibrated_C = 0.0;
    std::optional<double> root;
    double t_star = 0.0;
    std::vector<ObservableRecord> sub_records, super_records;
};

inline MassThresholdResult experiment_mass_threshold(const ExperimentConfig& cfg) {
    if (cfg.lambda != -1)
        throw std::invalid_argument("mass_threshold: needs the focusing sign lambda = -1");
    const PhysicsSetup phys = make_physics(cfg);
    const double psi_sup = phys.kernel ? phys.kernel->spec.psi.sup() : 1.0;

    const int solver_points = std::min(cfg.grid_points, 128);
    const Grid solver_grid = build_grid(cfg.grid_dim, solver_points, cfg.grid_half_length);
    GroundStateResult gs = solve_ground_state(solver_grid, cfg.alpha, cfg.gamma);

    MassThresholdResult out;
    out.gs_residual = gs.residual;
    out.threshold = critical_mass_threshold(gs, psi_sup);

    ComplexField Qbox = resample(gs.Q, phys.grid);
    const double mass_Q = l2_norm_sq(Qbox);

    // Sub-threshold run: ||phi||_{L^2} = 0.9 threshold; tracks the growth of
    // the homogeneous H^{alpha/2} norm along the trajectory.
    {
        ComplexField phi = Qbox;
        const double want = 0.81 * out.threshold * out.threshold;
        const double scale = std::sqrt(want / mass_Q);
        for (cplx& v : phi.values) v *= scale;
        const double h0 = sobolev_norm(phi, 0.5 * cfg.alpha, SobolevVariant::homogeneous);

        EvolutionState state{phi, 0.0, cfg.dt, phys.dispersion, phys.kernel_ptr(), 0};
        double growth = 1.0;
        std::vector<Observer> observers;
        observers.push_back([&](const EvolutionState& s) {
            ObservableRecord r = phys.observables.record(s.u, s.t);
            const double hdot = sobolev_norm(s.u, 0.5 * cfg.alpha, SobolevVariant::homogeneous);
            r.extra["hdot_alpha_half"] = hdot;
            growth = std::max(growth, hdot / h0);
            out.sub_records.push_back(std::move(r));
        });
        out.sub_summary =
            evolve(state, cfg.t_final, controller_from(cfg), observers, cfg.observer_cadence);
        out.sub_hdot_growth = growth;
    }

    // Negative-energy rescale: amplify until E(phi) < 0, then evolve to blowup.
    {
        double amp = 1.2;
        ComplexField phi = Qbox;
        double E = 0.0;
        for (int tries = 0; tries < 12; ++tries) {
            phi = Qbox;
            for (cplx& v : phi.values) v *= amp;
            E = energy(phi, phys.dispersion, phys.kernel_ptr()).total;
            if (E < 0.0) break;
            amp *= 1.3;
        }
        if (!(E < 0.0)) throw std::runtime_error("mass_threshold: could not reach E(phi) < 0");
        out.super_energy = E;
        out.super_dilation = dilation_virial(phi);
        out.super_weighted = weighted_virial(phi, cfg.m, cfg.alpha);
        const double mass_phi = l2_norm_sq(phi);

        EvolutionResult res = run_evolution(cfg, phys, phi);
        out.super_summary = res.summary;
        out.t_star = res.summary.t_end;
        out.super_records = std::move(res.records);

        const VirialReport vir =
            virial_inequality_residuals(out.super_records, E, cfg.alpha, mass_phi);
        out.calibrated_C = std::max(vir.fitted_C, 0.0);
        out.root = parabola_root(E, out.super_dilation, out.super_weighted, cfg.alpha,
                                 out.calibrated_C, mass_phi * mass_phi);
    }

    if (!cfg.output_dir.empty()) {
        RunManifest m = detail::start_manifest(cfg);
        detail::emit_csv(cfg, m, "sub_threshold.csv", out.sub_records);
        detail::emit_csv(cfg, m, "super_threshold.csv", out.super_records);
        m.status = to_string(out.super_summary.status);
        m.extra["threshold"] = out.threshold;
        m.extra["ground_state_residual"] = out.gs_residual;
        m.extra["sub_status"] = to_string(out.sub_summary.status);
        m.extra["sub_hdot_growth"] = out.sub_hdot_growth;
        m.extra["super_status"] = to_string(out.super_summary.status);
        m.extra["super_energy"] = out.super_energy;
        m.extra["calibrated_C"] = out.calibrated_C;
        m.extra["t_star"] = out.t_star;
        if (out.root) m.extra["parabola_root"] = *out.root;
        detail::finish_manifest(cfg, m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// blowup_scan: rescalings of one profile across a mass grid.
// ---------------------------------------------------------------------------

struct BlowupScanRow {
    double mass = 0.0;
    std::string status;
    double t_star = -1.0;
    double energy = 0.0;
    double dilation = 0.0;
    double weighted = 0.0;
    std::optional<double> root;
};

struct BlowupScanResult {
    std::vector<BlowupScanRow> rows;
    double calibrated_C = 0.0;
};

inline BlowupScanResult experiment_blowup_scan(const ExperimentConfig& cfg) {
    if (cfg.scan_masses.empty())
        throw std::invalid_argument("blowup_scan: scan.masses must be set");
    if (std::abs(cfg.gamma - cfg.alpha) > 1e-12 || cfg.lambda != -1 || !(cfg.m > 0.0))
        throw std::invalid_argument("blowup_scan: needs gamma = alpha, lambda = -1, m > 0");
    const PhysicsSetup phys = make_physics(cfg);
    if (phys.kernel && phys.kernel->spec.psi.has_derivative()) {
        for (double d : phys.kernel->spec.psi.deriv)
            if (d > 0.0)
                throw std::invalid_argument("blowup_scan: psi' must be nonpositive");
    }

    ComplexField profile = make_initial(cfg, phys.grid);
    const double base_mass = l2_norm_sq(profile);

    BlowupScanResult out;
    double calibrated = 0.0;
    for (double mass : cfg.scan_masses) {
        ComplexField phi = profile;
        const double scale = std::sqrt(mass / base_mass);
        for (cplx& v : phi.values) v *= scale;
        BlowupScanRow row;
        row.mass = mass;
        row.energy = energy(phi, phys.dispersion, phys.kernel_ptr()).total;
        row.dilation = dilation_virial(phi);
        row.weighted = weighted_virial(phi, cfg.m, cfg.alpha);
        EvolutionResult res = run_evolution(cfg, phys, phi);
        row.status = to_string(res.summary.status);
        if (res.summary.status == RunStatus::Blowup) row.t_star = res.summary.t_end;
        if (res.records.size() >= 16) {
            const VirialReport vir =
                virial_inequality_residuals(res.records, row.energy, cfg.alpha, mass);
            calibrated = std::max(calibrated, vir.fitted_C);
        }
        out.rows.push_back(row);
    }
    out.calibrated_C = std::max(calibrated, 0.0);
    for (BlowupScanRow& row : out.rows)
        row.root = parabola_root(row.energy, row.dilation, row.weighted, cfg.alpha,
                                 out.calibrated_C, row.mass * row.mass);

    if (!cfg.output_dir.empty()) {
        namespace fs = std::filesystem;
        RunManifest m = detail::start_manifest(cfg);
        fs::create_directories(cfg.output_dir);
        const std::string path = (fs::path(cfg.output_dir) / "blowup_scan.csv").string();
        std::ofstream csv(path);
        csv << "mass,status,t_star,energy,dilation_virial,weighted_virial,parabola_root\n";
        for (const BlowupScanRow& r : out.rows) {
            csv << format_g17(r.mass) << "," << r.status << "," << format_g17(r.t_star) << ","
                << format_g17(r.energy) << "," << format_g17(r.dilation) << ","
                << format_g17(r.weighted) << ","
                << (r.root ? format_g17(*r.root) : std::string("none")) << "\n";
        }
        m.emitted.push_back(path);
        m.extra["calibrated_C"] = out.calibrated_C;
        detail::finish_manifest(cfg, m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// scattering: smallness regime gamma > 2 alpha; builds phi+ at two horizons.
// ---------------------------------------------------------------------------

struct ScatteringResult {
    std::vector<double> accumulator_times;
    std::vector<double> accumulator_values;
    std::vector<double> defect_times;
    std::vector<double> defects;          // against the full-horizon phi+
    double phi_plus_diff = 0.0;           // H^s gap between the two horizons
    double max_tail_increment_rate = 0.0; // relative accumulator growth per unit time
    TrajectorySummary summary;
};

inline ScatteringResult experiment_scattering(const ExperimentConfig& cfg) {
    const PhysicsSetup phys = make_physics(cfg);
    if (!phys.kernel) throw std::invalid_argument("scattering: needs a nonzero potential");
    const double s_norm = cfg.comparison_s > 0.0 ? cfg.comparison_s : 0.5 * cfg.gamma;
    const ComplexField phi = make_initial(cfg, phys.grid);

    ExperimentConfig run_cfg = cfg;
    run_cfg.t_final = cfg.scattering_t_max;

    StrichartzAccumulator acc;
    acc.q = 2.0;
    acc.r = 2.0 * cfg.grid_dim / (cfg.grid_dim - 2.0);
    acc.sobolev_s = s_norm - 0.5 * (2.0 - cfg.alpha);

    ScatteringResult out;
    std::vector<double> f_times;
    std::vector<ComplexField> f_snaps;
    std::vector<double> u_times;
    std::vector<ComplexField> u_snaps;
    const double f_cadence = cfg.scattering_t_max / 160.0;
    const double u_cadence = cfg.scattering_t_max / 40.0;
    double next_f = 0.0, next_u = 0.0;

    EvolutionState state{phi, 0.0, cfg.dt, phys.dispersion, phys.kernel_ptr(), 0};
    std::vector<Observer> observers;
    observers.push_back([&](const EvolutionState& s) {
        acc.update(s.u, s.t);
        out.accumulator_times.push_back(s.t);
        out.accumulator_values.push_back(acc.value());
        if (s.t + 1e-9 >= next_f) {
            f_times.push_back(s.t);
            f_snaps.push_back(nonlinearity(s.u, *phys.kernel));
            next_f += f_cadence;
        }
        if (s.t + 1e-9 >= next_u) {
            u_times.push_back(s.t);
            u_snaps.push_back(s.u);
            next_u += u_cadence;
        }
    });
    out.summary =
        evolve(state, run_cfg.t_final, controller_from(run_cfg), observers, cfg.observer_cadence);

    // phi+ at the half and full horizons.
    std::size_t half = 0;
    while (half < f_times.size() && f_times[half] <= 0.5 * cfg.scattering_t_max + 1e-9) ++half;
    std::vector<double> half_times(f_times.begin(), f_times.begin() + half);
    std::vector<ComplexField> half_snaps(f_snaps.begin(), f_snaps.begin() + half);
    const ComplexField phi_plus_half =
        scattering_state(half_times, half_snaps, phi, phys.dispersion);
    const ComplexField phi_plus = scattering_state(f_times, f_snaps, phi, phys.dispersion);
    out.phi_plus_diff = sobolev_norm(phi_plus - phi_plus_half, s_norm);

    for (std::size_t i = 0; i < u_times.size(); ++i) {
        out.defect_times.push_back(u_times[i]);
        out.defects.push_back(
            scattering_defect(u_snaps[i], u_times[i], phi_plus, phys.dispersion, s_norm));
    }

    // Worst relative accumulator increment per unit time past the quiet time.
    double worst_rate = 0.0;
    for (std::size_t i = 1; i < out.accumulator_times.size(); ++i) {
        const double t0 = out.accumulator_times[i - 1], t1 = out.accumulator_times[i];
        if (t0 < cfg.quiet_time || t1 <= t0) continue;
        const double rel =
            (out.accumulator_values[i] - out.accumulator_values[i - 1]) /
            std::max(out.accumulator_values[i - 1], 1e-300) / (t1 - t0);
        worst_rate = std::max(worst_rate, rel);
    }
    out.max_tail_increment_rate = worst_rate;

    if (!cfg.output_dir.empty()) {
        namespace fs = std::filesystem;
        RunManifest m = detail::start_manifest(cfg);
        fs::create_directories(cfg.output_dir);
        const std::string path = (fs::path(cfg.output_dir) / "scattering.json").string();
        nlohmann::json j;
        j["accumulator"] = {{"t", out.accumulator_times}, {"value", out.accumulator_values}};
        j["defect"] = {{"t", out.defect_times}, {"value", out.defects}};
        j["phi_plus_diff"] = out.phi_plus_diff;
        j["max_tail_increment_rate"] = out.max_tail_increment_rate;
        std::ofstream js(path);
        js << j.dump(2) << "\n";
        m.emitted.push_back(path);
        m.status = to_string(out.summary.status);
        detail::finish_manifest(cfg, m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// limits: m -> 0 against the homogeneous flow, m -> infinity against the
// nonrelativistic flow of the phase-modulated solution.
// ---------------------------------------------------------------------------

struct LimitResult {
    std::vector<double> masses;
    std::vector<double> gaps; // sup_t H^s gap per mass
};

namespace detail {

// Evolves phi under the given dispersion with the shared controller and
// returns snapshots at every observer cadence point.
inline std::pair<std::vector<double>, std::vector<ComplexField>> evolve_snapshots(
    const ExperimentConfig& cfg, const DispersionSymbol& dispersion,
    const HartreeKernel* kernel, const ComplexField& phi) {
    std::vector<double> times;
    std::vector<ComplexField> snaps;
    EvolutionState state{phi, 0.0, cfg.dt, dispersion, kernel, 0};
    std::vector<Observer> observers;
    observers.push_back([&](const EvolutionState& s) {
        times.push_back(s.t);
        snaps.push_back(s.u);
    });
    evolve(state, cfg.t_final, controller_from(cfg), observers, cfg.observer_cadence);
    return {times, snaps};
}

}  // namespace detail

inline LimitResult experiment_limit_m_to_zero(const ExperimentConfig& cfg) {
    if (cfg.limit_masses.empty())
        throw std::invalid_argument("limit experiment: limit.masses must be set");
    for (std::size_t i = 1; i < cfg.limit_masses.size(); ++i)
        if (cfg.limit_masses[i] >= cfg.limit_masses[i - 1])
            throw std::invalid_argument("limit_m_to_zero: masses must decrease");
    const PhysicsSetup phys = make_physics(cfg);
    const ComplexField phi = make_initial(cfg, phys.grid);
    const double s_norm = cfg.comparison_s > 0.0 ? cfg.comparison_s : 0.5 * cfg.gamma;

    const DispersionSymbol massless = DispersionSymbol::homogeneous(phys.grid, cfg.alpha);
    auto [ref_times, ref_snaps] =
        detail::evolve_snapshots(cfg, massless, phys.kernel_ptr(), phi);

    LimitResult out;
    for (double m : cfg.limit_masses) {
        const DispersionSymbol disp = DispersionSymbol::relativistic(phys.grid, m, cfg.alpha);
        auto [times, snaps] = detail::evolve_snapshots(cfg, disp, phys.kernel_ptr(), phi);
        double gap = 0.0;
        const std::size_t n = std::min(snaps.size(), ref_snaps.size());
        for (std::size_t i = 0; i < n; ++i)
            gap = std::max(gap, sobolev_norm(snaps[i] - ref_snaps[i], s_norm));
        out.masses.push_back(m);
        out.gaps.push_back(gap);
    }
    if (!cfg.output_dir.empty()) {
        RunManifest m = detail::start_manifest(cfg);
        m.extra["masses"] = out.masses;
        m.extra["gaps"] = out.gaps;
        detail::finish_manifest(cfg, m);
    }
    return out;
}

inline LimitResult experiment_limit_m_to_infinity(const ExperimentConfig& cfg) {
    if (cfg.limit_masses.empty())
        throw std::invalid_argument("limit experiment: limit.masses must be set");
    for (std::size_t i = 1; i < cfg.limit_masses.size(); ++i)
        if (cfg.limit_masses[i] <= cfg.limit_masses[i - 1])
            throw std::invalid_argument("limit_m_to_infinity: masses must increase");
    const PhysicsSetup phys = make_physics(cfg);
    const ComplexField phi = make_initial(cfg, phys.grid);
    const double s_norm = cfg.comparison_s > 0.0 ? cfg.comparison_s : 0.5 * cfg.gamma;

    LimitResult out;
    for (double m : cfg.limit_masses) {
        const DispersionSymbol disp_u = DispersionSymbol::relativistic(phys.grid, m, cfg.alpha);
        const DispersionSymbol disp_w = DispersionSymbol::nonrelativistic(phys.grid, m, cfg.alpha);
        auto [times_u, snaps_u] = detail::evolve_snapshots(cfg, disp_u, phys.kernel_ptr(), phi);
        auto [times_w, snaps_w] = detail::evolve_snapshots(cfg, disp_w, phys.kernel_ptr(), phi);
        double gap = 0.0;
        const std::size_t n = std::min(snaps_u.size(), snaps_w.size());
        for (std::size_t i = 0; i < n; ++i) {
            const ComplexField v = phase_modulate(snaps_u[i], times_u[i], m, cfg.alpha);
            gap = std::max(gap, sobolev_norm(v - snaps_w[i], s_norm));
        }
        out.masses.push_back(m);
        out.gaps.push_back(gap);
    }
    if (!cfg.output_dir.empty()) {
        RunManifest m = detail::start_manifest(cfg);
        m.extra["masses"] = out.masses;
        m.extra["gaps"] = out.gaps;
        detail::finish_manifest(cfg, m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ground_state and inequalities wrappers
// ---------------------------------------------------------------------------

inline GroundStateResult experiment_ground_state(const ExperimentConfig& cfg) {
    const Grid grid = build_grid(cfg.grid_dim, cfg.grid_points, cfg.grid_half_length);
    GroundStateResult gs = solve_ground_state(grid, cfg.alpha, cfg.gamma);
    if (!cfg.output_dir.empty()) {
        RunManifest m = detail::start_manifest(cfg);
        detail::emit_checkpoint(cfg, m, "ground_state.ck", gs.Q, 0.0, 0.0);
        m.extra["residual"] = gs.residual;
        m.extra["mass"] = gs.mass;
        m.extra["l2_norm"] = std::sqrt(gs.mass);
        m.extra["quotient_value"] = gs.quotient_value;
        m.extra["iterations"] = gs.iterations;
        m.extra["converged"] = gs.converged;
        m.extra["box_half_length"] = gs.Q.grid.half_length;
        detail::finish_manifest(cfg, m);
    }
    return gs;
}

struct InequalitySuiteResult {
    std::vector<RatioReport> reports;
};

inline InequalitySuiteResult experiment_inequalities(const ExperimentConfig& cfg) {
    InequalitySuiteResult out;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 24; ++i) seeds.push_back(cfg.seed + i);

    {
        const Grid g = build_grid(2, 48, 10.0);
        family::GrfSpec spec{2, 10.0, 12, 2.0, false};
        auto fam = family::standard(spec, seeds);
        out.reports.push_back(check_hardy(fam, g, 1.0));
        out.reports.push_back(check_kgamma_bound(fam, g, 1.0, 0.5));
        out.reports.push_back(check_stein_weiss(fam, g, 0.5, 1.5, 2.0));
        auto fam_v = family::standard(family::GrfSpec{2, 10.0, 12, 2.5, false},
                                      std::vector<std::uint64_t>(seeds.begin(), seeds.end()));
        out.reports.push_back(check_leibniz(fam, fam_v, g, 0.8, LeibnizSplit{}));
    }
    {
        const Grid g = build_grid(3, 24, 8.0);
        family::GrfSpec spec{3, 8.0, 6, 1.6, false};
        auto fam = family::standard(spec, std::vector<std::uint64_t>(seeds.begin(),
                                                                     seeds.begin() + 8));
        out.reports.push_back(check_weighted_convolution(fam, g, 2.0, 2.0, 0.2, 0.8));
    }
    {
        const Grid g = build_grid(2, 48, 10.0);
        std::vector<FamilySample> fam;
        for (std::uint64_t s : seeds)
            fam.push_back({s, [s](const Grid& gg) { return family::radial_shells(s, gg); }});
        out.reports.push_back(
            check_commutator_sweep(fam, g, {0.5, 1.0, 2.0, 4.0}, 1.5));
    }

    if (!cfg.output_dir.empty()) {
        namespace fs = std::filesystem;
        RunManifest m = detail::start_manifest(cfg);
        fs::create_directories(cfg.output_dir);
        nlohmann::json j = nlohmann::json::array();
        for (const RatioReport& r : out.reports) j.push_back(ratio_report_json(r));
        const std::string path = (fs::path(cfg.output_dir) / "inequalities.json").string();
        std::ofstream js(path);
        js << j.dump(2) << "\n";
        m.emitted.push_back(path);
        detail::finish_manifest(cfg, m);
    }
    return out;
}

// Dispatch by configured experiment kind; returns the manifest status string.
inline std::string run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::evolve:
            return to_string(experiment_evolve(cfg).summary.status);
        case ExperimentKind::mass_threshold: {
            auto r = experiment_mass_threshold(cfg);
            return to_string(r.super_summary.status);
        }
        case ExperimentKind::blowup_scan: {
            experiment_blowup_scan(cfg);
            return "ok";
        }
        case ExperimentKind::scattering:
            return to_string(experiment_scattering(cfg).summary.status);
        case ExperimentKind::limit_m_to_zero:
            experiment_limit_m_to_zero(cfg);
            return "ok";
        case ExperimentKind::limit_m_to_infinity:
            experiment_limit_m_to_infinity(cfg);
            return "ok";
        case ExperimentKind::ground_state:
            return experiment_ground_state(cfg).converged ? "ok" : "not_converged";
        case ExperimentKind::inequalities:
            experiment_inequalities(cfg);
            return "ok";
    }
    return "unknown";
}

}  // namespace fhnls
