// fhnls: batch runner for the fractional Hartree NLS toolkit.
//
//   fhnls run --config <path> [--out <dir>] [--workers k]
//   fhnls ground-state --alpha A --gamma G --n N [--points P] [--half-length L]
//   fhnls check-inequalities [--suite all] [--seed S] [--out dir]
//   fhnls resume --checkpoint <path> --t-final T [--psi one] [--out dir]

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

#include "fhnls/experiments.hpp"

using namespace fhnls;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int workers) {
    ExperimentConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (workers > 0) cfg.workers = workers;
    const std::string status = run_experiment(cfg);
    std::printf("%s: %s\n", to_string(cfg.experiment), status.c_str());
    const bool ok = status == "ok" || status == "Completed" || status == "Blowup";
    return ok ? 0 : 1;
}

int cmd_ground_state(int n, int points, double half_length, double alpha, double gamma,
                     double tol, const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::ground_state;
    cfg.grid_dim = n;
    cfg.grid_points = points;
    cfg.grid_half_length = half_length;
    cfg.alpha = alpha;
    cfg.gamma = gamma;
    cfg.lambda = -1;
    cfg.output_dir = out_dir;
    const Grid grid = build_grid(n, points, half_length);
    GroundStateResult gs = solve_ground_state(grid, alpha, gamma, tol);
    if (!out_dir.empty()) {
        RunManifest m;
        std::ostringstream h;
        h << std::hex << config_hash(cfg);
        m.config_hash = h.str();
        m.started = m.finished = timestamp_now();
        std::filesystem::create_directories(out_dir);
        Checkpoint ck;
        ck.u = gs.Q;
        ck.alpha = alpha;
        ck.gamma = gamma;
        ck.lambda = -1;
        const std::string path = (std::filesystem::path(out_dir) / "ground_state.ck").string();
        save_checkpoint(path, ck);
        m.emitted.push_back(path);
        m.extra["residual"] = gs.residual;
        m.extra["mass"] = gs.mass;
        m.extra["iterations"] = gs.iterations;
        write_manifest((std::filesystem::path(out_dir) / "manifest.json").string(), m);
    }
    std::printf("ground state: residual %.3e, ||Q||_L2 %.10g, mass %.10g, iterations %d, L %.6g\n",
                gs.residual, std::sqrt(gs.mass), gs.mass, gs.iterations,
                gs.Q.grid.half_length);
    return gs.converged ? 0 : 1;
}

int cmd_inequalities(std::uint64_t seed, const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::inequalities;
    cfg.seed = seed;
    cfg.output_dir = out_dir;
    InequalitySuiteResult res = experiment_inequalities(cfg);
    bool ok = true;
    for (const RatioReport& r : res.reports) {
        std::printf("%-22s worst_ratio %.6g  (seed %llu)  refinement %.3f\n",
                    r.inequality_id.c_str(), r.worst_ratio,
                    static_cast<unsigned long long>(r.worst_case_seed), r.refinement_ratio);
        ok = ok && std::isfinite(r.worst_ratio) && r.worst_ratio > 0.0;
    }
    return ok ? 0 : 1;
}

int cmd_resume(const std::string& ckpt, double t_final, double dt, const std::string& psi,
               const std::string& out_dir) {
    Checkpoint ck = load_checkpoint(ckpt);
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::evolve;
    cfg.grid_dim = ck.u.grid.dim;
    cfg.grid_points = ck.u.grid.points;
    cfg.grid_half_length = ck.u.grid.half_length;
    cfg.m = ck.m;
    cfg.alpha = ck.alpha;
    cfg.gamma = ck.gamma;
    cfg.lambda = ck.lambda;
    cfg.psi = psi;
    cfg.dt = dt > 0.0 ? dt : (ck.dt > 0.0 ? ck.dt : 1e-3);
    cfg.t_final = t_final;
    cfg.output_dir = out_dir;

    const PhysicsSetup phys = make_physics(cfg);
    EvolutionState state{ck.u, ck.t, cfg.dt, phys.dispersion, phys.kernel_ptr(), 0};
    std::vector<ObservableRecord> records;
    std::vector<Observer> observers;
    observers.push_back([&](const EvolutionState& s) {
        records.push_back(phys.observables.record(s.u, s.t));
    });
    TrajectorySummary summary =
        evolve(state, t_final, controller_from(cfg), observers, cfg.observer_cadence);
    if (!out_dir.empty()) {
        RunManifest m;
        std::ostringstream h;
        h << std::hex << config_hash(cfg);
        m.config_hash = h.str();
        m.started = m.finished = timestamp_now();
        std::filesystem::create_directories(out_dir);
        const std::string csv = (std::filesystem::path(out_dir) / "observables.csv").string();
        write_observables_csv(csv, records);
        m.emitted.push_back(csv);
        Checkpoint final_ck = ck;
        final_ck.u = state.u;
        final_ck.t = state.t;
        final_ck.dt = summary.final_dt;
        const std::string path = (std::filesystem::path(out_dir) / "final.ck").string();
        save_checkpoint(path, final_ck);
        m.emitted.push_back(path);
        m.status = to_string(summary.status);
        write_manifest((std::filesystem::path(out_dir) / "manifest.json").string(), m);
    }
    std::printf("resume: %s at t = %.6g after %ld steps\n", to_string(summary.status),
                summary.t_end, summary.steps);
    return summary.status == RunStatus::Completed || summary.status == RunStatus::Blowup ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Hartree NLS simulator and diagnostic suite"};
    app.require_subcommand(1);

    std::string config_path, out_dir, ckpt_path, psi = "one", suite = "all";
    int workers = 0, n = 1, points = 64;
    double half_length = 12.0, alpha = 1.5, gamma = 0.5, tol = 1e-7;
    double t_final = 1.0, dt = 0.0;
    std::uint64_t seed = 1;

    CLI::App* run = app.add_subcommand("run", "run a configured experiment");
    run->add_option("--config", config_path, "config file path")->required();
    run->add_option("--out", out_dir, "override output directory");
    run->add_option("--workers", workers, "worker cap for scans");

    CLI::App* gs = app.add_subcommand("ground-state", "solve the stationary profile");
    gs->add_option("--n", n, "dimension")->required();
    gs->add_option("--alpha", alpha, "dispersion exponent")->required();
    gs->add_option("--gamma", gamma, "potential exponent")->required();
    gs->add_option("--points", points, "grid points per axis");
    gs->add_option("--half-length", half_length, "box half length");
    gs->add_option("--tol", tol, "residual tolerance");
    gs->add_option("--out", out_dir, "output directory");

    CLI::App* ineq = app.add_subcommand("check-inequalities", "run the inequality suite");
    ineq->add_option("--suite", suite, "suite name (all)");
    ineq->add_option("--seed", seed, "base seed");
    ineq->add_option("--out", out_dir, "output directory");

    CLI::App* res = app.add_subcommand("resume", "continue from a checkpoint");
    res->add_option("--checkpoint", ckpt_path, "checkpoint path")->required();
    res->add_option("--t-final", t_final, "new final time")->required();
    res->add_option("--dt", dt, "time step override");
    res->add_option("--psi", psi, "potential profile (one, zero or table path)");
    res->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, workers);
        if (gs->parsed()) return cmd_ground_state(n, points, half_length, alpha, gamma, tol, out_dir);
        if (ineq->parsed()) return cmd_inequalities(seed, out_dir);
        if (res->parsed()) return cmd_resume(ckpt_path, t_final, dt, psi, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
