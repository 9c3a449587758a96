#pragma once

// Experiment configuration: flat "key = value" text with dotted keys and a
// schema_version field. Parsing is strict (unknown or malformed keys are
// reported by name) and serialization is canonical, so a config round-trips
// losslessly and hashes stably.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhnls {

enum class ExperimentKind {
    evolve,
    blowup_scan,
    mass_threshold,
    scattering,
    limit_m_to_zero,
    limit_m_to_infinity,
    ground_state,
    inequalities,
};

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::evolve: return "evolve";
        case ExperimentKind::blowup_scan: return "blowup_scan";
        case ExperimentKind::mass_threshold: return "mass_threshold";
        case ExperimentKind::scattering: return "scattering";
        case ExperimentKind::limit_m_to_zero: return "limit_m_to_zero";
        case ExperimentKind::limit_m_to_infinity: return "limit_m_to_infinity";
        case ExperimentKind::ground_state: return "ground_state";
        case ExperimentKind::inequalities: return "inequalities";
    }
    return "unknown";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
    static const std::map<std::string, ExperimentKind> table = {
        {"evolve", ExperimentKind::evolve},
        {"blowup_scan", ExperimentKind::blowup_scan},
        {"mass_threshold", ExperimentKind::mass_threshold},
        {"scattering", ExperimentKind::scattering},
        {"limit_m_to_zero", ExperimentKind::limit_m_to_zero},
        {"limit_m_to_infinity", ExperimentKind::limit_m_to_infinity},
        {"ground_state", ExperimentKind::ground_state},
        {"inequalities", ExperimentKind::inequalities},
    };
    auto it = table.find(s);
    if (it == table.end()) throw std::invalid_argument("config: unknown experiment '" + s + "'");
    return it->second;
}

enum class InitialKind { gaussian, plane_modulated, from_checkpoint, ground_state_rescaled };

struct InitialData {
    InitialKind kind = InitialKind::gaussian;
    double width = 1.0;
    double amplitude = 1.0;
    double chirp = 0.0;
    std::vector<double> center; // per axis; empty = origin
    std::vector<int> wave;      // plane_modulated mode integers
    double mass = 1.0;          // ground_state_rescaled target ||phi||^2
    std::string checkpoint;    // from_checkpoint path
};

struct ExperimentConfig {
    int schema_version = 1;
    ExperimentKind experiment = ExperimentKind::evolve;

    int grid_dim = 1;
    int grid_points = 64;
    double grid_half_length = 10.0;

    double m = 0.0;
    double alpha = 1.5;
    double gamma = 0.5;
    int lambda = 1;
    std::string psi = "one"; // "one", "zero" (free flow) or a CSV table path

    InitialData initial;

    double t_final = 1.0;
    double dt = 1e-3;
    bool adaptive = false;
    double energy_tol = 1e-6;
    double dt_min = 1e-8;
    double dt_max = 1e-2;
    int observer_cadence = 10; // steps between records
    double blowup_threshold = 1e3;

    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int workers = 1;

    std::vector<double> scan_masses;  // blowup_scan: ||phi||^2 rescalings
    std::vector<double> limit_masses; // limit experiments
    double comparison_s = -1.0;       // H^s norm for limits/scattering; < 0 = gamma/2
    double scattering_t_max = 40.0;
    double quiet_time = 20.0;         // saturation watch starts here
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::vector<double> parse_doubles(const std::string& s, const std::string& key) {
    std::istringstream ss(s);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (out.empty()) throw std::invalid_argument("config: field '" + key + "' needs numbers");
    return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: malformed line '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (kv.count(key)) throw std::invalid_argument("config: duplicate field '" + key + "'");
        kv[key] = val;
    }

    ExperimentConfig c;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_double = [&](const std::string& key, double& dst) {
        if (auto v = take(key)) {
            try {
                dst = std::stod(*v);
            } catch (...) {
                throw std::invalid_argument("config: field '" + key + "' is not a number");
            }
        }
    };
    auto take_int = [&](const std::string& key, auto& dst) {
        if (auto v = take(key)) {
            try {
                dst = static_cast<std::decay_t<decltype(dst)>>(std::stoll(*v));
            } catch (...) {
                throw std::invalid_argument("config: field '" + key + "' is not an integer");
            }
        }
    };

    take_int("schema_version", c.schema_version);
    if (c.schema_version != 1)
        throw std::invalid_argument("config: unsupported schema_version");
    if (auto v = take("experiment")) c.experiment = experiment_from_string(*v);
    take_int("grid.n", c.grid_dim);
    take_int("grid.points", c.grid_points);
    take_double("grid.half_length", c.grid_half_length);
    take_double("physics.m", c.m);
    take_double("physics.alpha", c.alpha);
    take_double("physics.gamma", c.gamma);
    take_int("physics.lambda", c.lambda);
    if (auto v = take("physics.psi")) c.psi = *v;

    if (auto v = take("initial.kind")) {
        if (*v == "gaussian") c.initial.kind = InitialKind::gaussian;
        else if (*v == "plane_modulated") c.initial.kind = InitialKind::plane_modulated;
        else if (*v == "from_checkpoint") c.initial.kind = InitialKind::from_checkpoint;
        else if (*v == "ground_state_rescaled")
            c.initial.kind = InitialKind::ground_state_rescaled;
        else throw std::invalid_argument("config: unknown initial.kind '" + *v + "'");
    }
    take_double("initial.width", c.initial.width);
    take_double("initial.amplitude", c.initial.amplitude);
    take_double("initial.chirp", c.initial.chirp);
    if (auto v = take("initial.center")) c.initial.center = detail::parse_doubles(*v, "initial.center");
    if (auto v = take("initial.wave")) {
        for (double d : detail::parse_doubles(*v, "initial.wave"))
            c.initial.wave.push_back(static_cast<int>(d));
    }
    take_double("initial.mass", c.initial.mass);
    if (auto v = take("initial.checkpoint")) c.initial.checkpoint = *v;

    take_double("time.t_final", c.t_final);
    take_double("time.dt", c.dt);
    take_int("time.adaptive", c.adaptive);
    take_double("time.energy_tol", c.energy_tol);
    take_double("time.dt_min", c.dt_min);
    take_double("time.dt_max", c.dt_max);
    take_int("time.observer_cadence", c.observer_cadence);
    take_double("time.blowup_threshold", c.blowup_threshold);

    if (auto v = take("output.directory")) c.output_dir = *v;
    take_int("seed", c.seed);
    take_int("workers", c.workers);

    if (auto v = take("scan.masses")) c.scan_masses = detail::parse_doubles(*v, "scan.masses");
    if (auto v = take("limit.masses")) c.limit_masses = detail::parse_doubles(*v, "limit.masses");
    take_double("comparison.s", c.comparison_s);
    take_double("scattering.t_max", c.scattering_t_max);
    take_double("scattering.quiet_time", c.quiet_time);

    if (!kv.empty())
        throw std::invalid_argument("config: unknown field '" + kv.begin()->first + "'");
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

inline std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "schema_version = " << c.schema_version << "\n";
    out << "experiment = " << to_string(c.experiment) << "\n";
    out << "grid.n = " << c.grid_dim << "\n";
    out << "grid.points = " << c.grid_points << "\n";
    out << "grid.half_length = " << c.grid_half_length << "\n";
    out << "physics.m = " << c.m << "\n";
    out << "physics.alpha = " << c.alpha << "\n";
    out << "physics.gamma = " << c.gamma << "\n";
    out << "physics.lambda = " << c.lambda << "\n";
    out << "physics.psi = " << c.psi << "\n";
    const char* kinds[] = {"gaussian", "plane_modulated", "from_checkpoint",
                           "ground_state_rescaled"};
    out << "initial.kind = " << kinds[static_cast<int>(c.initial.kind)] << "\n";
    out << "initial.width = " << c.initial.width << "\n";
    out << "initial.amplitude = " << c.initial.amplitude << "\n";
    out << "initial.chirp = " << c.initial.chirp << "\n";
    if (!c.initial.center.empty()) {
        out << "initial.center =";
        for (double v : c.initial.center) out << " " << v;
        out << "\n";
    }
    if (!c.initial.wave.empty()) {
        out << "initial.wave =";
        for (int v : c.initial.wave) out << " " << v;
        out << "\n";
    }
    out << "initial.mass = " << c.initial.mass << "\n";
    if (!c.initial.checkpoint.empty())
        out << "initial.checkpoint = " << c.initial.checkpoint << "\n";
    out << "time.t_final = " << c.t_final << "\n";
    out << "time.dt = " << c.dt << "\n";
    out << "time.adaptive = " << (c.adaptive ? 1 : 0) << "\n";
    out << "time.energy_tol = " << c.energy_tol << "\n";
    out << "time.dt_min = " << c.dt_min << "\n";
    out << "time.dt_max = " << c.dt_max << "\n";
    out << "time.observer_cadence = " << c.observer_cadence << "\n";
    out << "time.blowup_threshold = " << c.blowup_threshold << "\n";
    out << "output.directory = " << c.output_dir << "\n";
    out << "seed = " << c.seed << "\n";
    out << "workers = " << c.workers << "\n";
    if (!c.scan_masses.empty()) {
        out << "scan.masses =";
        for (double v : c.scan_masses) out << " " << v;
        out << "\n";
    }
    if (!c.limit_masses.empty()) {
        out << "limit.masses =";
        for (double v : c.limit_masses) out << " " << v;
        out << "\n";
    }
    out << "comparison.s = " << c.comparison_s << "\n";
    out << "scattering.t_max = " << c.scattering_t_max << "\n";
    out << "scattering.quiet_time = " << c.quiet_time << "\n";
    return out.str();
}

// FNV-1a 64-bit over the canonical serialization; stable across processes.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
    const std::string s = serialize_config(c);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace fhnls
