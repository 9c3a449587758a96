#pragma once

// CSV emission for observable time series and the JSON run manifest. Numeric
// formatting is fixed at %.17g so identical runs produce byte-identical files.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhnls/config.hpp"
#include "fhnls/inequality.hpp"
#include "fhnls/observables.hpp"

namespace fhnls {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_observables_csv(const std::string& path,
                                  const std::vector<ObservableRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    std::set<std::string> extra_keys;
    for (const ObservableRecord& r : records)
        for (const auto& [k, v] : r.extra) extra_keys.insert(k);
    out << "t,mass,kinetic,potential,energy,h_gamma_half,dilation_virial,"
           "weighted_virial,moment2,grad_moment";
    for (const std::string& k : extra_keys) out << "," << k;
    out << "\n";
    for (const ObservableRecord& r : records) {
        out << format_g17(r.t) << "," << format_g17(r.mass) << "," << format_g17(r.kinetic)
            << "," << format_g17(r.potential) << "," << format_g17(r.energy) << ","
            << format_g17(r.h_gamma_half) << "," << format_g17(r.dilation_virial) << ","
            << format_g17(r.weighted_virial) << "," << format_g17(r.moment2) << ","
            << format_g17(r.grad_moment);
        for (const std::string& k : extra_keys) {
            auto it = r.extra.find(k);
            out << "," << (it == r.extra.end() ? "" : format_g17(it->second));
        }
        out << "\n";
    }
}

struct RunManifest {
    std::string config_hash;
    std::string code_version = "fhnls 1.0.0";
    std::string started;
    std::string finished;
    std::string status = "ok";
    std::vector<std::string> emitted;
    nlohmann::json extra = nlohmann::json::object();
};

inline std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json j;
    j["config_hash"] = m.config_hash;
    j["code_version"] = m.code_version;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["status"] = m.status;
    j["emitted"] = m.emitted;
    j["results"] = m.extra;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("manifest: cannot open " + path);
    out << j.dump(2) << "\n";
}

inline nlohmann::json ratio_report_json(const RatioReport& r) {
    nlohmann::json j;
    j["inequality_id"] = r.inequality_id;
    j["samples"] = r.samples;
    j["worst_ratio"] = r.worst_ratio;
    j["worst_case_seed"] = r.worst_case_seed;
    j["grid"] = {{"n", r.grid_dim}, {"points", r.grid_points}, {"half_length", r.grid_half_length}};
    j["refinement_ratio"] = r.refinement_ratio;
    if (!r.sweep_ratios.empty()) j["sweep_ratios"] = r.sweep_ratios;
    return j;
}

}  // namespace fhnls
